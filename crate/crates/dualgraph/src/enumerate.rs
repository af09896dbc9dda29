//! Desk-scale catalogs: semistable data found through the Pell
//! correspondence, and bounded searches for normal non-semistable germs.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::classify::{classify_normal_nss, classify_semistable, NeighborhoodVerdict};
use crate::error::Result;
use crate::exact::hj::HjChain;
use crate::exact::pell::{pell_solve, PellProblem};
use crate::exact::{gcd, mod_inverse};
use crate::germ::analyze_germ;
use crate::graph::{Vertex, WeightedDualGraph};
use crate::quotient::TDecomposition;

/// Pell-solution provenance of a semistable datum, written for the
/// canonical orientation: `x = 2n/d' - n'` and `y = n'/d` solve
/// `(k/d) x^2 - d(k-4) y^2 = 4` for the divisor `d` of `k = dd'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PellWitness {
    pub divisor: u64,
    pub x: i64,
    pub y: u64,
}

/// A full semistable datum `(n, a, d), (n', a', d')`, canonically ordered
/// so the lexicographically smaller triple comes first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemistableDatum {
    pub p: TDecomposition,
    pub q: TDecomposition,
    pub witness: PellWitness,
}

impl SemistableDatum {
    pub fn verdict(&self) -> NeighborhoodVerdict {
        classify_semistable(&self.p, &self.q)
    }

    fn key(&self) -> (u64, u64, u64, u64, u64, u64) {
        (self.p.n, self.p.a, self.p.d, self.q.n, self.q.a, self.q.d)
    }
}

fn divisors(k: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=k).filter(|d| k.is_multiple_of(*d)).collect();
    out.sort_unstable();
    out
}

/// All semistable data over a target of type A_{k-1}, complete for
/// solutions with `n'/d` up to `bound`. Mirror-ordered duplicates are
/// merged.
pub fn enumerate_semistable(k: u64, bound: u64) -> Vec<SemistableDatum> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for d in divisors(k) {
        let dp = k / d;
        let problem = PellProblem::new(
            BigInt::from(dp),
            BigInt::from(d) * (BigInt::from(k) - 4),
            BigInt::from(4),
        )
        .expect("divisor is positive");
        for (x, y) in pell_solve(&problem, bound) {
            if !y.is_positive() {
                continue;
            }
            let n_prime = BigInt::from(d) * &y;
            // n = d' (x + n') / 2; odd parity has no preimage
            let twice_m = &x + &n_prime;
            if twice_m.is_negative() || twice_m.is_zero() || twice_m.is_odd() {
                continue;
            }
            let n: BigInt = BigInt::from(dp) * twice_m / BigInt::from(2);
            let (Some(n), Some(np)) = (n.to_u64(), n_prime.to_u64()) else {
                continue;
            };
            if n < 2 || np < 2 {
                continue;
            }
            let Some(a) = mod_inverse(np % n, n) else {
                continue;
            };
            let a_prime_num = n as i128 * np as i128 + 1 - a as i128 * np as i128;
            if a_prime_num <= 0 || a_prime_num % n as i128 != 0 {
                continue;
            }
            let ap = (a_prime_num / n as i128) as u64;
            let (Ok(p), Ok(q)) = (
                TDecomposition::new(n, d, a),
                TDecomposition::new(np, dp, ap),
            ) else {
                continue;
            };
            if !classify_semistable(&p, &q).passed() {
                continue;
            }
            let datum = canonical_datum(p, q);
            if seen.insert(datum.key()) {
                out.push(datum);
            }
        }
    }
    out.sort_by_key(|d| d.key());
    out
}

/// Swaps the two triples into lexicographic order and rewrites the Pell
/// witness for the orientation that is kept.
fn canonical_datum(p: TDecomposition, q: TDecomposition) -> SemistableDatum {
    let (p, q) = if (q.n, q.a, q.d) < (p.n, p.a, p.d) {
        (q, p)
    } else {
        (p, q)
    };
    // d | n' and d' | n hold for data passing the class conditions
    let witness = PellWitness {
        divisor: p.d,
        x: (2 * p.n / q.d) as i64 - q.n as i64,
        y: q.n / p.d,
    };
    SemistableDatum { p, q, witness }
}

/// Builds the dual graph of a candidate normal germ: the resolution chain
/// of the singularity, a marked (-1)-curve meeting its `position`-th
/// vertex, and an optional chain of `duval_len` (-2)-curves hanging off
/// the marked curve.
pub fn build_normal_germ(
    chain: &HjChain,
    position: usize,
    duval_len: u64,
) -> Result<WeightedDualGraph> {
    assert!(position >= 1 && position <= chain.len());
    let mut vertices: Vec<Vertex> = chain
        .self_intersections()
        .iter()
        .enumerate()
        .map(|(i, &w)| Vertex::new(format!("E{}", i + 1), w, false))
        .collect();
    let mut edges: Vec<(usize, usize)> = (1..chain.len()).map(|i| (i - 1, i)).collect();
    let c = vertices.len();
    vertices.push(Vertex::new("C", -1, true));
    edges.push((position - 1, c));
    for j in 0..duval_len as usize {
        vertices.push(Vertex::new(format!("D{}", j + 1), -2, false));
        let prev = if j == 0 { c } else { c + j };
        edges.push((prev, c + j + 1));
    }
    WeightedDualGraph::build(vertices, edges, None)
}

/// One germ found by the bounded normal search.
#[derive(Debug, Clone)]
pub struct NormalGermRecord {
    pub n: u64,
    pub d: u64,
    pub a: u64,
    /// 1-based vertex of the singularity chain met by the marked curve.
    pub position: usize,
    /// Length of the DuVal tail hanging off the marked curve.
    pub duval_len: u64,
    pub graph: WeightedDualGraph,
    pub verdict: NeighborhoodVerdict,
}

/// Brute-force search over single-chain germs: every smoothable
/// singularity `(n, d, a)` within the bounds, every attachment position,
/// every DuVal tail length up to `max_chain`. Emitted germs pass the full
/// normal non-semistable checklist.
pub fn enumerate_normal_nss(max_n: u64, max_d: u64, max_chain: u64) -> Vec<NormalGermRecord> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for d in 1..=max_d {
            for a in 1..n {
                if gcd(a, n) != 1 {
                    continue;
                }
                let t = TDecomposition::new(n, d, a).expect("valid by construction");
                let Ok(point) = t.singularity() else {
                    continue;
                };
                let chain = point.dual_chain();
                for position in 1..=chain.len() {
                    for duval_len in 0..=max_chain {
                        let Ok(graph) = build_normal_germ(&chain, position, duval_len) else {
                            continue;
                        };
                        let Ok(analysis) = analyze_germ(&graph) else {
                            continue;
                        };
                        let Ok(verdict) = classify_normal_nss(&analysis) else {
                            continue;
                        };
                        if verdict.passed() {
                            out.push(NormalGermRecord {
                                n,
                                d,
                                a,
                                position,
                                duval_len,
                                graph,
                                verdict,
                            });
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|r| (r.n, r.d, r.a, r.position, r.duval_len));
    out
}
