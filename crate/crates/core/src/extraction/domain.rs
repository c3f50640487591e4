use crate::ontology::{NodeIx, OntologyGraph};
use crate::te_model::Terminology;
use crate::text::normalize_term;

use super::ExtractionError;

/// Depth of the predefined domain concepts under the research topic node.
pub const DOMAIN_DEPTH: u32 = 3;

/// Depth-3 descendants of the `ResearchTopic` node. Without such a node,
/// every depth-3 node; for shallower graphs, every non-root node.
pub fn default_domain_candidates(g: &OntologyGraph) -> Vec<NodeIx> {
    let topic = g
        .nodes()
        .find(|(_, n)| n.id == "ResearchTopic" || normalize_term(&n.label) == "research topic")
        .map(|(ix, _)| ix);
    let at_depth = |nodes: Vec<NodeIx>| -> Vec<NodeIx> {
        nodes
            .into_iter()
            .filter(|&ix| g.depth(ix) == DOMAIN_DEPTH)
            .collect()
    };
    if let Some(topic) = topic {
        let under = at_depth(g.descendants(topic));
        if !under.is_empty() {
            return under;
        }
    }
    let all = at_depth(g.nodes().map(|(ix, _)| ix).collect());
    if !all.is_empty() {
        return all;
    }
    g.nodes()
        .map(|(ix, _)| ix)
        .filter(|&ix| ix != g.root())
        .collect()
}

/// Links the target and returns the candidate with the highest Wu-Palmer
/// similarity to it; ties go to the shallower node, then the smaller label.
pub fn induce_domain(
    g: &OntologyGraph,
    target: &Terminology,
    candidates: &[NodeIx],
) -> Result<NodeIx, ExtractionError> {
    if candidates.is_empty() {
        return Err(ExtractionError::NoCandidates);
    }
    if let Some(&bad) = candidates.iter().find(|ix| ix.index() >= g.len()) {
        return Err(ExtractionError::UnknownCandidate(format!(
            "#{}",
            bad.index()
        )));
    }
    let anchor = match target.concept_id.as_deref().and_then(|id| g.lookup(id)) {
        Some(ix) => ix,
        None => {
            let link = g.link(&target.surface);
            if !link.is_confident() {
                return Err(ExtractionError::ManualDomainRequired {
                    target: target.surface.clone(),
                    nearest: g.label(link.node).to_string(),
                    ratio: link.ratio,
                });
            }
            link.node
        }
    };
    let best = candidates
        .iter()
        .map(|&c| (c, g.wu_palmer_ix(anchor, c)))
        .max_by(|(a, sa), (b, sb)| {
            sa.total_cmp(sb)
                .then_with(|| g.depth(*b).cmp(&g.depth(*a)))
                .then_with(|| g.label(*b).cmp(g.label(*a)))
        })
        .map(|(c, _)| c);
    Ok(best.expect("candidates checked non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::tests::FIXTURE;

    fn fixture() -> OntologyGraph {
        OntologyGraph::load(FIXTURE).unwrap()
    }

    #[test]
    fn relation_extraction_lands_in_information_extraction() {
        let g = fixture();
        let cands = [
            g.lookup("InformationExtraction").unwrap(),
            g.lookup("MachineTranslation").unwrap(),
        ];
        let got = induce_domain(&g, &Terminology::new("relation extraction"), &cands).unwrap();
        assert_eq!(g.id(got), "InformationExtraction");
    }

    #[test]
    fn exact_candidate_label_wins() {
        let g = fixture();
        let cands = [
            g.lookup("InformationExtraction").unwrap(),
            g.lookup("MachineTranslation").unwrap(),
        ];
        let got = induce_domain(&g, &Terminology::new("machine translation"), &cands).unwrap();
        assert_eq!(g.id(got), "MachineTranslation");
    }

    #[test]
    fn singleton_candidate() {
        let g = fixture();
        let only = [g.lookup("MachineLearning").unwrap()];
        assert_eq!(
            induce_domain(&g, &Terminology::new("relation extraction"), &only).unwrap(),
            only[0]
        );
    }

    #[test]
    fn unlinkable_target_needs_manual_domain() {
        let g = fixture();
        let cands = default_domain_candidates(&g);
        assert!(matches!(
            induce_domain(&g, &Terminology::new("zzzz qqqq"), &cands),
            Err(ExtractionError::ManualDomainRequired { .. })
        ));
        assert_eq!(
            induce_domain(&g, &Terminology::new("x"), &[]),
            Err(ExtractionError::NoCandidates)
        );
    }

    #[test]
    fn default_candidates_on_fixture() {
        let g = fixture();
        let mut ids: Vec<&str> = default_domain_candidates(&g)
            .into_iter()
            .map(|ix| g.id(ix))
            .collect();
        ids.sort();
        assert_eq!(ids, ["InformationExtraction", "MachineTranslation"]);
    }

    #[test]
    fn equal_scores_fall_back_to_label() {
        let g = fixture();
        // both candidates meet "general approach" only at the root: 2/(2+3)
        let tied = [
            g.lookup("MachineTranslation").unwrap(),
            g.lookup("InformationExtraction").unwrap(),
        ];
        let got = induce_domain(&g, &Terminology::new("general approach"), &tied).unwrap();
        assert_eq!(g.id(got), "InformationExtraction");
    }
}
