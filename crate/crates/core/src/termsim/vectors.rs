use std::collections::HashMap;
use std::fmt::Write as _;

use crate::te_model::Terminology;

use super::{Anchor, ResolvedTerm, TermSimBackend, TermSimError};

#[derive(Debug, Clone, PartialEq)]
pub struct TermVector {
    pub term: String,
    pub components: Vec<f64>,
}

pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, TermSimError> {
    if u.len() != v.len() {
        return Err(TermSimError::DimensionMismatch(u.len(), v.len()));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Err(TermSimError::ZeroVector);
    }
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

/// Cosine clamped to `[0, 1]`.
pub fn cosine_score(u: &TermVector, v: &TermVector) -> Result<f64, TermSimError> {
    cosine(&u.components, &v.components).map(|c| c.max(0.0))
}

/// Dense term vectors of a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSpace {
    dim: usize,
    terms: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f64>,
}

impl VectorSpace {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            terms: Vec::new(),
            index: HashMap::new(),
            data: Vec::new(),
        }
    }

    /// Adds or replaces a vector; terms are stored lowercased.
    pub fn insert(&mut self, term: &str, components: &[f64]) -> Result<(), TermSimError> {
        if components.len() != self.dim {
            return Err(TermSimError::DimensionMismatch(self.dim, components.len()));
        }
        let key = crate::text::collapse(term);
        match self.index.get(&key) {
            Some(&row) => {
                self.data[row * self.dim..(row + 1) * self.dim].copy_from_slice(components)
            }
            None => {
                self.index.insert(key.clone(), self.terms.len());
                self.terms.push(key);
                self.data.extend_from_slice(components);
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, term: &str) -> Option<&[f64]> {
        self.index
            .get(term)
            .map(|&row| &self.data[row * self.dim..(row + 1) * self.dim])
    }

    pub fn term_vector(&self, term: &str) -> Option<TermVector> {
        self.get(term).map(|c| TermVector {
            term: term.to_string(),
            components: c.to_vec(),
        })
    }

    /// Vector for a canonical phrase: the phrase itself (spaces or
    /// underscores), else the mean of its in-vocabulary words.
    pub fn phrase_vector(&self, canonical: &str) -> Option<Vec<f64>> {
        if let Some(v) = self
            .get(canonical)
            .or_else(|| self.get(&canonical.replace(' ', "_")))
        {
            return Some(v.to_vec());
        }
        let mut sum = vec![0.0; self.dim];
        let mut n = 0usize;
        for word in canonical.split(' ') {
            if let Some(v) = self.get(word) {
                sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
                n += 1;
            }
        }
        (n > 0).then(|| sum.into_iter().map(|s| s / n as f64).collect())
    }

    /// First line is the dimension, then `term c1 .. ck` per line. The last
    /// k fields are components, so terms may contain spaces.
    pub fn parse(text: &str) -> Result<Self, TermSimError> {
        let err = |line: usize, message: String| TermSimError::VectorFile { line, message };
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| err(1, "missing dimension line".into()))?;
        let dim: usize = header
            .trim()
            .parse()
            .map_err(|_| err(1, format!("bad dimension {:?}", header.trim())))?;
        if dim == 0 {
            return Err(err(1, "dimension must be at least 1".into()));
        }
        let mut space = Self::new(dim);
        for (n, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() <= dim {
                return Err(err(n + 1, format!("expected a term and {dim} components")));
            }
            let split = fields.len() - dim;
            let comps = fields[split..]
                .iter()
                .map(|f| f.parse::<f64>().ok().filter(|x| x.is_finite()))
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| err(n + 1, "components must be finite numbers".into()))?;
            space.insert(&fields[..split].join(" "), &comps)?;
        }
        Ok(space)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.dim);
        for (row, term) in self.terms.iter().enumerate() {
            out.push_str(term);
            for c in &self.data[row * self.dim..(row + 1) * self.dim] {
                let _ = write!(out, " {c}");
            }
            out.push('\n');
        }
        out
    }
}

/// Cosine similarity over a vector space. Out-of-vocabulary terms only
/// match an identical canonical form.
#[derive(Debug, Clone)]
pub struct VectorBackend {
    space: VectorSpace,
}

impl VectorBackend {
    pub fn new(space: VectorSpace) -> Self {
        Self { space }
    }

    pub fn space(&self) -> &VectorSpace {
        &self.space
    }
}

impl TermSimBackend for VectorBackend {
    fn name(&self) -> &'static str {
        "vectors"
    }

    fn resolve(&self, term: &Terminology) -> ResolvedTerm {
        let anchor = self
            .space
            .phrase_vector(&term.canonical)
            .filter(|v| v.iter().any(|x| *x != 0.0))
            .map_or(Anchor::Unknown, Anchor::Vector);
        ResolvedTerm {
            canonical: term.canonical.clone(),
            anchor,
        }
    }

    fn compare(&self, a: &ResolvedTerm, b: &ResolvedTerm) -> f64 {
        if a.canonical == b.canonical {
            return 1.0;
        }
        match (&a.anchor, &b.anchor) {
            (Anchor::Vector(u), Anchor::Vector(v)) => cosine(u, v).map_or(0.0, |c| c.max(0.0)),
            _ => 0.0,
        }
    }
}
