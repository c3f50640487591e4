//! Concept linking by exact name lookup, then minimum edit distance.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use super::{ConceptNode, NodeIx, OntologyGraph};
use crate::text::{collapse, normalize_term};

/// Links whose `distance / max(len(query), len(name))` exceeds this ratio
/// are low-confidence.
pub const LOW_CONFIDENCE_RATIO: f64 = 0.4;

/// Unit-cost edit distance on lowercased, whitespace-collapsed strings.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = collapse(a).chars().collect();
    let b: Vec<char> = collapse(b).chars().collect();
    bounded_distance(&a, &b, usize::MAX).expect("unbounded distance always resolves")
}

/// Edit distance if it is at most `bound`, else `None`.
pub(crate) fn bounded_distance(a: &[char], b: &[char], bound: usize) -> Option<usize> {
    bounded_distance_in(a, b, bound, &mut Vec::new(), &mut Vec::new())
}

/// [`bounded_distance`] with caller-owned row buffers.
fn bounded_distance_in(
    a: &[char],
    b: &[char],
    bound: usize,
    prev: &mut Vec<usize>,
    cur: &mut Vec<usize>,
) -> Option<usize> {
    if a.len().abs_diff(b.len()) > bound {
        return None;
    }
    if a.is_empty() || b.is_empty() {
        return Some(a.len().max(b.len()));
    }
    prev.clear();
    prev.extend(0..=b.len());
    cur.clear();
    cur.resize(b.len() + 1, 0);
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        let mut row_min = cur[0];
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
            row_min = row_min.min(cur[j + 1]);
        }
        if row_min > bound {
            return None;
        }
        std::mem::swap(prev, cur);
    }
    let d = prev[b.len()];
    (d <= bound).then_some(d)
}

/// Result of linking a terminology to an ontology node.
#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub node: NodeIx,
    /// Edit distance to the matched name; 0 for an exact label or synonym hit.
    pub distance: usize,
    /// The normalized label or synonym that produced the match.
    pub matched: String,
    /// `distance / max(len(query), len(matched))`, 0 when both are empty.
    pub ratio: f64,
}

impl Link {
    pub fn is_confident(&self) -> bool {
        self.ratio <= LOW_CONFIDENCE_RATIO
    }
}

#[derive(Debug, Clone)]
struct Entry {
    chars: Vec<char>,
    name: String,
    node: NodeIx,
}

/// Normalized labels and synonyms, keyed for exact lookup and bucketed by
/// character length for the edit-distance scan.
#[derive(Debug, Clone, Default)]
pub(crate) struct NameIndex {
    exact: HashMap<String, Vec<(NodeIx, String)>>,
    by_len: BTreeMap<usize, Vec<Entry>>,
    max_len: usize,
}

/// Candidate ordering: distance, then label, then node id, then the longer
/// name, then the name itself.
fn link_order<'a>(
    g: &'a OntologyGraph,
    d: usize,
    node: NodeIx,
    name: &'a str,
) -> (usize, &'a str, &'a str, Reverse<usize>, &'a str) {
    let n = g.node(node);
    (
        d,
        n.label.as_str(),
        n.id.as_str(),
        Reverse(name.chars().count()),
        name,
    )
}

impl NameIndex {
    pub(crate) fn build(nodes: &[ConceptNode]) -> Self {
        let mut index = NameIndex::default();
        for (i, node) in nodes.iter().enumerate() {
            let ix = NodeIx(i as u32);
            let mut seen: Vec<String> = Vec::new();
            for name in std::iter::once(&node.label).chain(&node.synonyms) {
                let norm = normalize_term(name);
                if norm.is_empty() || seen.contains(&norm) {
                    continue;
                }
                seen.push(norm.clone());
                index
                    .exact
                    .entry(norm.clone())
                    .or_default()
                    .push((ix, norm.clone()));
                let chars: Vec<char> = norm.chars().collect();
                index.max_len = index.max_len.max(chars.len());
                index.by_len.entry(chars.len()).or_default().push(Entry {
                    chars,
                    name: norm,
                    node: ix,
                });
            }
        }
        index
    }

    pub(crate) fn link<'a>(&'a self, g: &'a OntologyGraph, term: &str) -> Link {
        let query = normalize_term(term);
        let key = |d: usize, node: NodeIx, name: &'a str| link_order(g, d, node, name);

        if let Some(hits) = self.exact.get(&query) {
            let (node, name) = hits
                .iter()
                .min_by_key(|(node, name)| key(0, *node, name))
                .expect("exact buckets are non-empty");
            return Link {
                node: *node,
                distance: 0,
                matched: name.clone(),
                ratio: 0.0,
            };
        }

        let q: Vec<char> = query.chars().collect();
        let mut best: Option<(usize, NodeIx, &str)> = None;
        let horizon = q.len().max(self.max_len);
        let (mut prev, mut cur) = (Vec::new(), Vec::new());
        for delta in 0..=horizon {
            if best.is_some_and(|(d, _, _)| delta > d) {
                break;
            }
            let mut lens = vec![q.len() + delta];
            if delta > 0 && delta <= q.len() {
                lens.push(q.len() - delta);
            }
            for len in lens {
                let Some(bucket) = self.by_len.get(&len) else {
                    continue;
                };
                for e in bucket {
                    let bound = best.map_or(usize::MAX, |(d, _, _)| d);
                    let Some(d) = bounded_distance_in(&q, &e.chars, bound, &mut prev, &mut cur)
                    else {
                        continue;
                    };
                    let better = match best {
                        None => true,
                        Some((bd, bn, bname)) => key(d, e.node, &e.name) < key(bd, bn, bname),
                    };
                    if better {
                        best = Some((d, e.node, &e.name));
                    }
                }
            }
        }
        let (distance, node, matched) = best.expect("ontologies have at least one named node");
        let denom = q.len().max(matched.chars().count());
        let ratio = if denom == 0 {
            0.0
        } else {
            distance as f64 / denom as f64
        };
        Link {
            node,
            distance,
            matched: matched.to_string(),
            ratio,
        }
    }
}
