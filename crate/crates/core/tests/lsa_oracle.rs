mod common;

use common::{best_rank_k, frobenius_diff};
use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tesim_core::termsim::{build_lsa_space, term_document_matrix, truncated_svd, Weighting};

/// Random 10×8 count matrix (every term used at least once) and the
/// matching token lists; term `t0i` owns row i.
fn random_corpus(rng: &mut StdRng) -> (Vec<Vec<f64>>, Vec<Vec<String>>) {
    let (terms, docs) = (10, 8);
    let mut m = vec![vec![0.0; docs]; terms];
    for (i, row) in m.iter_mut().enumerate() {
        for cell in row.iter_mut() {
            *cell = f64::from(rng.gen_range(0..5u8));
        }
        if row.iter().all(|c| *c == 0.0) {
            row[i % docs] = 1.0;
        }
    }
    let corpus = (0..docs)
        .map(|d| {
            (0..terms)
                .flat_map(|t| std::iter::repeat_n(format!("t{t:02}"), m[t][d] as usize))
                .collect()
        })
        .collect();
    (m, corpus)
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|r| m.row(r).iter().copied().collect())
        .collect()
}

#[test]
fn rank_k_matches_independent_oracle() {
    let mut rng = StdRng::seed_from_u64(2024);
    for _ in 0..20 {
        let (m, corpus) = random_corpus(&mut rng);
        for k in 1..=8 {
            let space = build_lsa_space(&corpus, k, Weighting::RawCounts).unwrap();
            let diff = frobenius_diff(&to_rows(&space.reconstruct()), &best_rank_k(&m, k));
            assert!(diff < 1e-6, "k={k} diff={diff}");
        }
    }
}

#[test]
fn reconstruction_error_is_non_increasing_in_k() {
    let mut rng = StdRng::seed_from_u64(99);
    for _ in 0..20 {
        let m = DMatrix::from_fn(10, 8, |_, _| rng.gen_range(-3.0..3.0));
        let errs: Vec<f64> = (1..=8)
            .map(|k| (truncated_svd(&m, k).unwrap().reconstruct() - &m).norm())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{errs:?}");
        assert!(errs[7] < 1e-8);
    }
}

#[test]
fn weighted_matrix_matches_formula() {
    let docs: Vec<Vec<String>> = ["a a b", "b c", "a c c c"]
        .iter()
        .map(|d| d.split(' ').map(String::from).collect())
        .collect();
    let (terms, m) = term_document_matrix(&docs, Weighting::LogTfIdf);
    assert_eq!(terms, ["a", "b", "c"]);
    let idf = |df: f64| (4.0 / (1.0 + df)).ln() + 1.0;
    let want = [
        [3f64.ln() * idf(2.0), 0.0, 2f64.ln() * idf(2.0)],
        [2f64.ln() * idf(2.0), 2f64.ln() * idf(2.0), 0.0],
        [0.0, 2f64.ln() * idf(2.0), 4f64.ln() * idf(2.0)],
    ];
    for r in 0..3 {
        for c in 0..3 {
            assert!((m[(r, c)] - want[r][c]).abs() < 1e-12);
        }
    }
}

#[test]
fn full_rank_square_reconstructs_exactly() {
    let mut rng = StdRng::seed_from_u64(5);
    let m = DMatrix::from_fn(6, 6, |r, c| {
        if r == c {
            5.0
        } else {
            rng.gen_range(-1.0..1.0)
        }
    });
    assert!((truncated_svd(&m, 6).unwrap().reconstruct() - &m).norm() < 1e-8);
}

#[test]
fn deterministic_across_runs() {
    let mut rng = StdRng::seed_from_u64(11);
    let (_, corpus) = random_corpus(&mut rng);
    let a = build_lsa_space(&corpus, 3, Weighting::LogTfIdf).unwrap();
    let b = build_lsa_space(&corpus, 3, Weighting::LogTfIdf).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_vector_space().to_text(), b.to_vector_space().to_text());
}
