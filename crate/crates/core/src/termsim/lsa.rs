use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};

use super::{TermSimError, VectorSpace};

pub const DEFAULT_LSA_RANK: usize = 100;

/// Cell weighting of the term-by-document matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    /// `ln(1 + tf) * (ln((1 + D) / (1 + df)) + 1)`
    #[default]
    LogTfIdf,
    RawCounts,
}

/// Rank-k factors with singular values in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSvd {
    pub u: DMatrix<f64>,
    pub sigma: DVector<f64>,
    pub v: DMatrix<f64>,
}

impl TruncatedSvd {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.u * DMatrix::from_diagonal(&self.sigma) * self.v.transpose()
    }
}

/// Rank-k SVD of `m`. Each left singular vector is flipped so that its
/// largest-magnitude entry is non-negative (first such entry on ties).
pub fn truncated_svd(m: &DMatrix<f64>, k: usize) -> Result<TruncatedSvd, TermSimError> {
    let max = m.nrows().min(m.ncols());
    if k == 0 || k > max {
        return Err(TermSimError::RankOutOfRange { k, max });
    }
    let svd = m
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or(TermSimError::NoConvergence)?;
    let (Some(u), Some(v_t)) = (svd.u, svd.v_t) else {
        return Err(TermSimError::NoConvergence);
    };
    let s = svd.singular_values;
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));
    order.truncate(k);

    let mut uk = DMatrix::zeros(m.nrows(), k);
    let mut vk = DMatrix::zeros(m.ncols(), k);
    let mut sigma = DVector::zeros(k);
    for (col, &src) in order.iter().enumerate() {
        let mut ucol = u.column(src).into_owned();
        let mut vcol = v_t.row(src).transpose();
        let pivot = ucol.iter().fold(
            0.0f64,
            |best, &x| if x.abs() > best.abs() { x } else { best },
        );
        if pivot < 0.0 {
            ucol.neg_mut();
            vcol.neg_mut();
        }
        uk.set_column(col, &ucol);
        vk.set_column(col, &vcol);
        sigma[col] = s[src];
    }
    Ok(TruncatedSvd {
        u: uk,
        sigma,
        v: vk,
    })
}

/// Latent semantic space built from a tokenized corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct LsaSpace {
    /// Sorted vocabulary; row `i` of the matrices belongs to `terms[i]`.
    pub terms: Vec<String>,
    pub vocabulary: BTreeMap<String, usize>,
    pub doc_ids: Vec<String>,
    pub k: usize,
    pub weighting: Weighting,
    pub svd: TruncatedSvd,
}

impl LsaSpace {
    /// `U_k Σ_k`, one row per vocabulary term.
    pub fn term_vectors(&self) -> DMatrix<f64> {
        &self.svd.u * DMatrix::from_diagonal(&self.svd.sigma)
    }

    /// `V_k Σ_k`, one row per document.
    pub fn doc_vectors(&self) -> DMatrix<f64> {
        &self.svd.v * DMatrix::from_diagonal(&self.svd.sigma)
    }

    /// The rank-k approximation of the weighted matrix.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.svd.reconstruct()
    }

    pub fn term_vector(&self, term: &str) -> Option<Vec<f64>> {
        let row = *self.vocabulary.get(term)?;
        Some(
            (0..self.k)
                .map(|c| self.svd.u[(row, c)] * self.svd.sigma[c])
                .collect(),
        )
    }

    pub fn with_doc_ids(mut self, ids: Vec<String>) -> Self {
        assert_eq!(ids.len(), self.doc_ids.len(), "one id per document");
        self.doc_ids = ids;
        self
    }

    pub fn to_vector_space(&self) -> VectorSpace {
        let tv = self.term_vectors();
        let mut space = VectorSpace::new(self.k);
        let mut row = Vec::with_capacity(self.k);
        for (i, term) in self.terms.iter().enumerate() {
            row.clear();
            row.extend(tv.row(i).iter().copied());
            space.insert(term, &row).expect("rows have k components");
        }
        space
    }
}

/// Term-by-document matrix over the sorted vocabulary of `docs`.
pub fn term_document_matrix(
    docs: &[Vec<String>],
    weighting: Weighting,
) -> (Vec<String>, DMatrix<f64>) {
    let terms: Vec<String> = docs
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index: BTreeMap<&str, usize> = terms
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i))
        .collect();
    let mut m: DMatrix<f64> = DMatrix::zeros(terms.len(), docs.len());
    for (d, doc) in docs.iter().enumerate() {
        for tok in doc {
            m[(index[tok.as_str()], d)] += 1.0;
        }
    }
    if weighting == Weighting::LogTfIdf {
        let n_docs = docs.len() as f64;
        for r in 0..m.nrows() {
            let df = m.row(r).iter().filter(|&&c| c > 0.0).count() as f64;
            let idf = ((1.0 + n_docs) / (1.0 + df)).ln() + 1.0;
            for c in 0..m.ncols() {
                m[(r, c)] = (1.0 + m[(r, c)]).ln() * idf;
            }
        }
    }
    (terms, m)
}

/// Weighted term-by-document matrix and its rank-k truncated SVD.
/// Documents get ids `0..n` until renamed with [`LsaSpace::with_doc_ids`].
pub fn build_lsa_space(
    docs: &[Vec<String>],
    k: usize,
    weighting: Weighting,
) -> Result<LsaSpace, TermSimError> {
    if docs.is_empty() {
        return Err(TermSimError::EmptyCorpus);
    }
    let (terms, m) = term_document_matrix(docs, weighting);
    if terms.is_empty() {
        return Err(TermSimError::EmptyVocabulary);
    }
    let svd = truncated_svd(&m, k)?;
    let vocabulary = terms
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let doc_ids = (0..docs.len()).map(|i| i.to_string()).collect();
    Ok(LsaSpace {
        terms,
        vocabulary,
        doc_ids,
        k,
        weighting,
        svd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn identical_documents() {
        let docs = [doc("parse tree parse"), doc("parse tree parse")];
        let space = build_lsa_space(&docs, 1, Weighting::LogTfIdf).unwrap();
        let dv = space.doc_vectors();
        assert!((dv[(0, 0)] - dv[(1, 0)]).abs() < 1e-12);
        let v = space.term_vector("tree").unwrap();
        assert!((super::super::cosine(&v, &v).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_bounds() {
        let docs = [doc("a b"), doc("b c")];
        assert_eq!(
            build_lsa_space(&docs, 3, Weighting::RawCounts).unwrap_err(),
            TermSimError::RankOutOfRange { k: 3, max: 2 }
        );
        assert!(matches!(
            build_lsa_space(&docs, 0, Weighting::RawCounts),
            Err(TermSimError::RankOutOfRange { .. })
        ));
        assert_eq!(
            build_lsa_space(&[], 1, Weighting::RawCounts).unwrap_err(),
            TermSimError::EmptyCorpus
        );
        assert_eq!(
            build_lsa_space(&[vec![]], 1, Weighting::RawCounts).unwrap_err(),
            TermSimError::EmptyVocabulary
        );
    }

    #[test]
    fn singular_values_descend_and_signs_fixed() {
        let docs = [
            doc("a a b c"),
            doc("b c c d"),
            doc("a d d e"),
            doc("e e a b"),
        ];
        let space = build_lsa_space(&docs, 4, Weighting::RawCounts).unwrap();
        let s = &space.svd.sigma;
        assert!(s.iter().zip(s.iter().skip(1)).all(|(a, b)| a >= b));
        for c in 0..space.k {
            let col = space.svd.u.column(c);
            let pivot = col
                .iter()
                .fold(0.0f64, |b, &x| if x.abs() > b.abs() { x } else { b });
            assert!(pivot >= 0.0);
        }
    }

    #[test]
    fn full_rank_square_is_exact() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]);
        let svd = truncated_svd(&m, 3).unwrap();
        assert!((svd.reconstruct() - m).norm() < 1e-8);
    }
}
