use super::{NodeIx, OntologyError, OntologyGraph};
use crate::te_model::ResearchStyle;
use crate::text::normalize_term;

/// An ontology whose leaves are exactly the seven research styles.
///
/// A style is matched to the node whose id equals its name
/// (`IssueSolution`) or, failing that, whose label equals its label
/// (`issue solution`).
#[derive(Debug, Clone)]
pub struct StyleOntology {
    graph: OntologyGraph,
    nodes: [NodeIx; 7],
}

impl StyleOntology {
    pub fn new(graph: OntologyGraph) -> Result<Self, OntologyError> {
        let mut nodes = [NodeIx(0); 7];
        for (slot, style) in nodes.iter_mut().zip(ResearchStyle::ALL) {
            let found = graph.lookup(style.name()).or_else(|| {
                graph
                    .nodes()
                    .find(|(_, n)| normalize_term(&n.label) == style.label())
                    .map(|(ix, _)| ix)
            });
            *slot =
                found.ok_or_else(|| OntologyError::Style(format!("no node for style {style}")))?;
            if !graph.is_leaf(*slot) {
                return Err(OntologyError::Style(format!("style {style} is not a leaf")));
            }
        }
        if let Some((_, extra)) = graph
            .nodes()
            .find(|(ix, _)| graph.is_leaf(*ix) && !nodes.contains(ix))
        {
            return Err(OntologyError::Style(format!(
                "leaf `{}` is not a research style",
                extra.id
            )));
        }
        Ok(Self { graph, nodes })
    }

    pub fn load(source: &str) -> Result<Self, OntologyError> {
        Self::new(OntologyGraph::load(source)?)
    }

    pub fn graph(&self) -> &OntologyGraph {
        &self.graph
    }

    pub fn node(&self, style: ResearchStyle) -> NodeIx {
        self.nodes[style as usize]
    }

    /// Wu–Palmer similarity between two style nodes.
    pub fn similarity(&self, a: ResearchStyle, b: ResearchStyle) -> f64 {
        self.graph.wu_palmer_ix(self.node(a), self.node(b))
    }
}
