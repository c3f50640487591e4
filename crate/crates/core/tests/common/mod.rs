//! Reference implementations used as test oracles. They share no code with
//! the library: trees are rebuilt from the raw file text, the SVD oracle is
//! a Jacobi eigensolver on plain vectors, and the metrics use textbook sums.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::Rng;

/// Parent map read straight from an ontology file.
pub struct TreeOracle {
    parent: HashMap<String, Option<String>>,
    pub ids: Vec<String>,
}

impl TreeOracle {
    pub fn parse(tsv: &str) -> Self {
        let mut parent = HashMap::new();
        let mut ids = Vec::new();
        for line in tsv
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        {
            let f: Vec<&str> = line.split('\t').collect();
            let p = if f[1] == "-" {
                None
            } else {
                Some(f[1].to_string())
            };
            parent.insert(f[0].to_string(), p);
            ids.push(f[0].to_string());
        }
        Self { parent, ids }
    }

    /// Ancestors including the node itself, nearest first.
    pub fn ancestors(&self, id: &str) -> Vec<String> {
        let mut out = vec![id.to_string()];
        let mut cur = id.to_string();
        while let Some(Some(p)) = self.parent.get(&cur) {
            out.push(p.clone());
            cur = p.clone();
        }
        out
    }

    pub fn depth(&self, id: &str) -> usize {
        self.ancestors(id).len()
    }

    /// Deepest member of the intersection of both ancestor sets.
    pub fn lcs(&self, a: &str, b: &str) -> String {
        let bs: HashSet<String> = self.ancestors(b).into_iter().collect();
        self.ancestors(a)
            .into_iter()
            .filter(|x| bs.contains(x))
            .max_by_key(|x| self.depth(x))
            .expect("a rooted tree always has a common ancestor")
    }

    pub fn wu_palmer(&self, a: &str, b: &str) -> f64 {
        2.0 * self.depth(&self.lcs(a, b)) as f64 / (self.depth(a) + self.depth(b)) as f64
    }
}

/// Random tree in ontology file format; node `i` hangs under a random
/// earlier node.
pub fn random_tree_tsv(rng: &mut impl Rng, n: usize) -> String {
    let mut out = String::from("n0\t-\tnode zero\n");
    for i in 1..n {
        let p = rng.gen_range(0..i);
        out.push_str(&format!("n{i}\tn{p}\tnode {i}\n"));
    }
    out
}

type Mat = Vec<Vec<f64>>;

fn transpose(m: &Mat) -> Mat {
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j]).collect())
        .collect()
}

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = b[0].len();
    a.iter()
        .map(|r| {
            (0..n)
                .map(|j| r.iter().zip(b.iter()).map(|(x, br)| x * br[j]).sum())
                .collect()
        })
        .collect()
}

/// Eigenpairs of a symmetric matrix by cyclic Jacobi rotations,
/// eigenvalues descending, eigenvectors as columns.
#[allow(clippy::needless_range_loop)]
pub fn jacobi_eigen(sym: &Mat) -> (Vec<f64>, Mat) {
    let n = sym.len();
    let mut a = sym.clone();
    let mut v: Mat = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let vals = order.iter().map(|&i| a[i][i]).collect();
    let vecs = (0..n)
        .map(|r| order.iter().map(|&c| v[r][c]).collect())
        .collect();
    (vals, vecs)
}

/// Best rank-k approximation `M V_k V_kᵀ`, with `V` from the eigenvectors
/// of `MᵀM`.
pub fn best_rank_k(m: &Mat, k: usize) -> Mat {
    let mt = transpose(m);
    let (_, v) = jacobi_eigen(&matmul(&mt, m));
    let vk: Mat = v.iter().map(|r| r[..k].to_vec()).collect();
    matmul(&matmul(m, &vk), &transpose(&vk))
}

pub fn frobenius_diff(a: &Mat, b: &Mat) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y) * (x - y)))
        .sum::<f64>()
        .sqrt()
}

/// Pearson through raw sums.
pub fn pearson_sums(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|a| a * a).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

/// `(tp, tn, fp, fn)` by direct counting.
pub fn recount(scores: &[f64], labels: &[bool], t: f64) -> (usize, usize, usize, usize) {
    let mut c = (0, 0, 0, 0);
    for (s, l) in scores.iter().zip(labels) {
        let predicted = *s > t;
        match (predicted, *l) {
            (true, true) => c.0 += 1,
            (false, false) => c.1 += 1,
            (true, false) => c.2 += 1,
            (false, true) => c.3 += 1,
        }
    }
    c
}

/// F1 as `2tp / (2tp + fp + fn)`; `None` when precision or recall is undefined.
pub fn f1_direct(tp: usize, fp: usize, fn_: usize) -> Option<f64> {
    if tp + fp == 0 || tp + fn_ == 0 {
        return None;
    }
    Some(2.0 * tp as f64 / (2 * tp + fp + fn_) as f64)
}
