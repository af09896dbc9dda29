//! Condition checkers and invariant calculators for the three classes of
//! germ: normal non-semistable, non-normal non-semistable, and
//! semistable. Every check is exact and every verdict carries the
//! quantities it was evaluated from.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{gcd, rat, rat_int, Rat};
use crate::germ::GermAnalysis;
use crate::graph::line_index;
use crate::quotient::{cusp_classes_mb, CuspClass, CyclicQuotient, Orientation, TDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    NormalNss,
    NonnormalNss,
    Semistable,
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassTag::NormalNss => "normal non-semistable",
            ClassTag::NonnormalNss => "non-normal non-semistable",
            ClassTag::Semistable => "semistable",
        };
        f.write_str(s)
    }
}

/// One evaluated condition, identified by a stable tag.
#[derive(Debug, Clone)]
pub struct Condition {
    pub id: &'static str,
    pub holds: bool,
    pub witness: String,
}

impl Condition {
    fn new(id: &'static str, holds: bool, witness: String) -> Self {
        Condition { id, holds, witness }
    }
}

#[derive(Debug, Clone)]
pub enum Extras {
    Normal {
        decomposition: Option<(TDecomposition, Orientation)>,
        decompositions: Vec<(TDecomposition, Orientation)>,
        duval: Option<u64>,
        kz_c: Rat,
        c_sq: Rat,
    },
    Nonnormal {
        n: u64,
        a: u64,
        m: u64,
        b: u64,
        x1: Rat,
        x2: Rat,
        junction_families: Vec<CuspClass>,
    },
    Semistable {
        p: TDecomposition,
        q: TDecomposition,
        kz_c: Rat,
        c_sq: Rat,
    },
}

/// Per-class checklist plus the derived invariants of the contraction.
#[derive(Debug, Clone)]
pub struct NeighborhoodVerdict {
    pub class_tag: ClassTag,
    pub conditions: Vec<Condition>,
    /// Index of the total space; 0 when the germ does not determine one.
    pub index_n: u64,
    pub multiplicity_mu: Rat,
    /// `d` with the contraction target of type A_{d-1}, when determined.
    pub target_d: Option<u64>,
    pub s_position: Option<u64>,
    pub extras: Extras,
}

impl NeighborhoodVerdict {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn condition(&self, id: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.id == id)
    }
}

/// Multiplicity of the image curve, `-(K.C)^2 / C^2`. Requires `C^2 < 0`.
pub fn multiplicity(kc: &Rat, c2: &Rat) -> Result<Rat> {
    if !c2.is_negative() {
        return Err(Error::Degenerate(format!(
            "multiplicity needs C^2 < 0, got {c2}"
        )));
    }
    Ok(-(kc * kc) / c2)
}

/// `-1/n` exactly, read off a reduced rational; `None` otherwise.
fn reciprocal_order(kc: &Rat) -> Option<u64> {
    if kc.numer() == &BigInt::from(-1) {
        u64::try_from(kc.denom()).ok()
    } else {
        None
    }
}

/// Checks a one-marked-curve germ against the normal non-semistable
/// conditions: a single smoothable high-index point with at most one
/// DuVal companion, `K_Z.C = -1/n` and `C^2 = -1/n^2`.
pub fn classify_normal_nss(analysis: &GermAnalysis) -> Result<NeighborhoodVerdict> {
    if analysis.glue.is_some() {
        return Err(Error::WrongClass(
            "glued germ cannot be normal non-semistable".into(),
        ));
    }
    if analysis.marked.len() != 1 {
        return Err(Error::WrongClass(format!(
            "expected exactly one marked curve, found {}",
            analysis.marked.len()
        )));
    }
    let kc = analysis.kz_dot[0].clone();
    let c2 = analysis.self_int[0].clone();
    let highs = analysis.high_index_points();
    let duvals = analysis.duval_points();

    let decompositions = if highs.len() == 1 {
        let decs = highs[0].quotient.t_decompositions();
        if decs.is_empty() {
            return Err(Error::WrongClass(format!(
                "high index point {} admits no one-parameter-smoothable form",
                highs[0].quotient
            )));
        }
        decs
    } else {
        Vec::new()
    };

    let cond1 = Condition::new(
        "normal1.cond1",
        highs.len() == 1 && duvals.len() <= 1,
        format!(
            "high index points: [{}], DuVal points: [{}]",
            highs
                .iter()
                .map(|p| p.quotient.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            duvals
                .iter()
                .map(|p| p.quotient.to_string())
                .collect::<Vec<_>>()
                .join(", "),
        ),
    );

    let n_from_kc = reciprocal_order(&kc);
    let matching: Vec<(TDecomposition, Orientation)> = match n_from_kc {
        Some(n) => decompositions
            .iter()
            .copied()
            .filter(|(t, _)| t.n == n)
            .collect(),
        None => Vec::new(),
    };
    let cond2_holds = match n_from_kc {
        Some(n) => {
            !matching.is_empty() && c2 == -rat(1, 1) / rat_int((n * n) as i64)
        }
        None => false,
    };
    let cond2 = Condition::new(
        "normal1.cond2",
        cond2_holds,
        format!("K_Z.C = {kc}, C^2 = {c2}"),
    );

    let all: Vec<usize> = (0..analysis.graph.len()).collect();
    let residue = analysis.graph.blow_down_to_minimal(&all)?;
    let residue_ok = residue.is_all_minus_two_chain();
    let target_d = residue_ok.then(|| residue.len() as u64 + 1);
    let cond3 = Condition::new(
        "normal2.residue",
        residue_ok,
        match target_d {
            Some(d) => format!("blow-down residue A_{}, d = {d}", residue.len()),
            None => "blow-down residue is not a chain of (-2)-curves".into(),
        },
    );

    let mu = multiplicity(&kc, &c2)?;
    let decomposition = matching
        .iter()
        .copied()
        .min_by_key(|(t, o)| (*o, t.a))
        .or_else(|| decompositions.first().copied());

    Ok(NeighborhoodVerdict {
        class_tag: ClassTag::NormalNss,
        conditions: vec![cond1, cond2, cond3],
        index_n: n_from_kc.unwrap_or(0),
        multiplicity_mu: mu,
        target_d,
        s_position: None,
        extras: Extras::Normal {
            decomposition,
            decompositions,
            duval: duvals.first().and_then(|p| p.quotient.is_duval()),
            kz_c: kc,
            c_sq: c2,
        },
    })
}

/// Checks the five semistable conditions on a pair of decompositions
/// `(n, a, d)`, `(n', a', d')` and derives the intersection numbers from
/// them.
pub fn classify_semistable(p: &TDecomposition, q: &TDecomposition) -> NeighborhoodVerdict {
    let (n, a, d) = (p.n as i128, p.a as i128, p.d as i128);
    let (np, ap, dp) = (q.n as i128, q.a as i128, q.d as i128);

    let cond1 = Condition::new(
        "semistable1.cond1",
        p.n >= 2 && q.n >= 2,
        format!(
            "points 1/{}(1,{}) and 1/{}(1,{}) have indices {} and {}",
            p.singularity_order(),
            (p.a * p.n * p.d - 1) % p.singularity_order(),
            q.singularity_order(),
            (q.a * q.n * q.d - 1) % q.singularity_order(),
            p.n,
            q.n
        ),
    );
    let cond2 = Condition::new(
        "semistable1.cond2",
        gcd(p.n, q.n) == 1 && gcd(p.a, q.a) == 1,
        format!("gcd(n,n') = {}, gcd(a,a') = {}", gcd(p.n, q.n), gcd(p.a, q.a)),
    );
    let cond3 = Condition::new(
        "semistable1.cond3",
        q.n.is_multiple_of(p.d) && p.n.is_multiple_of(q.d),
        format!("d | n': {} | {}, d' | n: {} | {}", p.d, q.n, q.d, p.n),
    );
    let lhs4 = n * np - a * np - ap * n;
    let cond4 = Condition::new(
        "semistable1.cond4",
        lhs4 == -1,
        format!("nn' - an' - a'n = {lhs4}"),
    );
    let lhs5 = d * dp;
    let rhs5 = np * np * dp + n * n * d - n * np * d * dp;
    let cond5 = Condition::new(
        "semistable1.cond5",
        lhs5 == rhs5,
        format!("dd' = {lhs5}, n'^2 d' + n^2 d - nn'dd' = {rhs5}"),
    );

    let kz_c = Rat::new(BigInt::from(lhs4), BigInt::from(n * np));
    let c_sq = Rat::new(
        BigInt::from(n * np * d * dp - np * np * dp - n * n * d),
        BigInt::from(n * n * np * np * d * dp),
    );
    let mu = if c_sq.is_negative() {
        -(&kz_c * &kz_c) / &c_sq
    } else {
        rat_int(0)
    };

    NeighborhoodVerdict {
        class_tag: ClassTag::Semistable,
        conditions: vec![cond1, cond2, cond3, cond4, cond5],
        index_n: p.n * q.n,
        multiplicity_mu: mu,
        target_d: Some(p.d * q.d),
        s_position: None,
        extras: Extras::Semistable {
            p: *p,
            q: *q,
            kz_c,
            c_sq,
        },
    }
}

/// The section type and attachment position of a semistable germ with
/// axial multiplicities `k`, `k'`: the section is A_m with
/// `m = nk + n'k' - 1`, met at position `s = nk'/d' - n'k/d + kn`.
pub fn semistable_s_position(
    p: &TDecomposition,
    q: &TDecomposition,
    k: u64,
    kp: u64,
) -> Result<(u64, u64)> {
    if k == 0 {
        return Err(Error::OutOfRange {
            what: "axial multiplicity k",
            value: k,
        });
    }
    if kp == 0 {
        return Err(Error::OutOfRange {
            what: "axial multiplicity k'",
            value: kp,
        });
    }
    let m = p.n * k + q.n * kp - 1;
    let s = rat((p.n * kp) as i64, q.d as i64) - rat((q.n * k) as i64, p.d as i64)
        + rat_int((k * p.n) as i64);
    if !s.is_integer() {
        return Err(Error::NotIntegral {
            what: "section position s",
            value: s.to_string(),
        });
    }
    let s = s.to_integer();
    let s = u64::try_from(&s).map_err(|_| Error::NotIntegral {
        what: "section position s",
        value: s.to_string(),
    })?;
    Ok((m, s))
}

/// The index relation of a section met at position `k` in an A_nu chain;
/// same formula as [`line_index`], exposed under the name used by the
/// normal classification.
pub fn section_index(nu: u64, k: u64) -> Result<u64> {
    line_index(nu, k)
}

/// Checks a glued two-curve germ against the non-normal conditions and
/// computes the pullback multiplicities `x1`, `x2`, the image-curve
/// multiplicity, and the target type.
pub fn classify_nonnormal(analysis: &GermAnalysis) -> Result<NeighborhoodVerdict> {
    let Some((slot_u, slot_v)) = analysis.glue else {
        return Err(Error::WrongClass(
            "non-normal germs carry a glue flag identifying the two curves".into(),
        ));
    };
    if analysis.marked.len() != 2 {
        return Err(Error::WrongClass(format!(
            "expected exactly the two glued curves marked, found {} marked",
            analysis.marked.len()
        )));
    }
    let (vu, vv) = (analysis.marked[slot_u], analysis.marked[slot_v]);
    // the computation is anchored at the (-1)-curve of the pair
    let (v1, v2) = if analysis.graph.vertex(vu).weight == -1 {
        (vu, vv)
    } else if analysis.graph.vertex(vv).weight == -1 {
        (vv, vu)
    } else {
        return Err(Error::WrongClass(
            "neither glued curve is a (-1)-curve on the resolution".into(),
        ));
    };
    let s1 = analysis.marked_slot(v1).expect("glued curve is marked");
    let s2 = analysis.marked_slot(v2).expect("glued curve is marked");

    let mut solo1 = Vec::new();
    let mut solo2 = Vec::new();
    let mut junction = Vec::new();
    for point in &analysis.points {
        let t1 = point.attachment_of(v1).is_some();
        let t2 = point.attachment_of(v2).is_some();
        match (t1, t2) {
            (true, true) => junction.push(point),
            (true, false) => solo1.push(point),
            (false, true) => solo2.push(point),
            (false, false) => {
                return Err(Error::WrongClass(format!(
                    "singular point {} does not meet the central curve",
                    point.quotient
                )))
            }
        }
    }
    if solo1.len() != 1 || solo2.len() != 1 || junction.len() > 1 {
        return Err(Error::WrongClass(format!(
            "expected one point on each branch and at most one junction, \
             found {}/{}/{}",
            solo1.len(),
            solo2.len(),
            junction.len()
        )));
    }
    let read1 = solo1[0]
        .attachment_of(v1)
        .and_then(|a| a.reading)
        .ok_or_else(|| {
            Error::WrongClass("central curve meets its branch chain in the interior".into())
        })?;
    let read2 = solo2[0]
        .attachment_of(v2)
        .and_then(|a| a.reading)
        .ok_or_else(|| {
            Error::WrongClass("central curve meets its branch chain in the interior".into())
        })?;
    if read1.order() != read2.order() || read2.weight() != read1.order() - read1.weight() {
        return Err(Error::NotInversePair {
            p1: read1.to_string(),
            p2: read2.to_string(),
        });
    }
    let n = read1.order();
    let a = read1.weight();

    let (m, b) = match junction.first() {
        Some(point) => {
            let reading = point
                .attachment_of(v1)
                .and_then(|att| att.reading)
                .ok_or_else(|| {
                    Error::WrongClass("junction chain met in the interior".into())
                })?;
            (reading.order(), reading.order() - reading.weight())
        }
        None => {
            if !analysis.graph.are_adjacent(v1, v2) {
                return Err(Error::WrongClass(
                    "glued curves are neither adjacent nor joined by a junction chain".into(),
                ));
            }
            (1, 0)
        }
    };
    let junction_families = cusp_classes_mb(m, b);
    if junction_families.is_empty() {
        return Err(Error::UnrecognizedJunction(format!("1/{m}(1,-{b})")));
    }

    let c1s = analysis.cross_int[s1][s1].clone();
    let c2s = analysis.cross_int[s2][s2].clone();
    let c12 = analysis.cross_int[s1][s2].clone();
    let k1 = analysis.kz_dot[s1].clone();
    let k2 = analysis.kz_dot[s2].clone();

    // (C1 - C2)^2 = n^2 [ (C1.C2)^2 - C1^2 C2^2 ]
    let diff_sq = &c1s - &c12 - &c12 + &c2s;
    let rhs3 = rat_int((n * n) as i64) * (&c12 * &c12 - &c1s * &c2s);
    let cond3 = Condition::new(
        "nonnormal1.cond3",
        diff_sq == rhs3,
        format!("(C1-C2)^2 = {diff_sq}, n^2[(C1.C2)^2 - C1^2 C2^2] = {rhs3}"),
    );

    // am - (b+1)n divides both m + n^2 and b + 1 + an
    let t = a as i128 * m as i128 - (b as i128 + 1) * n as i128;
    let first = m as i128 + (n as i128) * (n as i128);
    let second = b as i128 + 1 + a as i128 * n as i128;
    let cond4_holds = t != 0 && first % t == 0 && second % t == 0;
    let x1_closed: Option<i128> = (t != 0 && first % t == 0).then(|| -1 - first / t);
    let cond4 = Condition::new(
        "nonnormal1.cond4",
        cond4_holds,
        format!(
            "am-(b+1)n = {t}; m+n^2 = {first}; b+1+an = {second}{}",
            match x1_closed {
                Some(x) => format!("; x1 = {x}"),
                None => String::new(),
            }
        ),
    );

    // pullback multiplicities from K_Zbar = f* K_T + x1 C1 + x2 C2
    let det = &c1s * &c2s - &c12 * &c12;
    if det.is_zero() {
        return Err(Error::Degenerate(
            "central curves have degenerate intersection form".into(),
        ));
    }
    let x1 = (&k1 * &c2s - &k2 * &c12) / &det;
    let x2 = (&c1s * &k2 - &c12 * &k1) / &det;
    let cond_int = Condition::new(
        "nonnormal1.integrality",
        x1.is_integer() && x2.is_integer(),
        format!("x1 = {x1}, x2 = {x2}"),
    );

    let mu = (&x1 + &x2 + rat_int(2)) / rat_int(n as i64);
    let cond_smooth = Condition::new(
        "nonnormal1.smooth",
        mu.is_one(),
        format!("mu = (x1+x2+2)/n = {mu}"),
    );

    let cartier_holds = x1.is_integer() && {
        let val = BigInt::from(a) * x1.to_integer() + BigInt::from(a) + BigInt::one();
        val.mod_floor(&BigInt::from(n)).is_zero()
    };
    let cond_cartier = Condition::new(
        "nonnormal1.cartier",
        cartier_holds,
        format!("n | a x1 + a + 1 with n = {n}, a = {a}"),
    );

    let minus_1_over_n = rat(-1, n as i64);
    let sub1 = &k1 + &c1s + &c12;
    let sub2 = &k2 + &c12 + &c2s;
    let cond_sub = Condition::new(
        "nonnormal1.subadjunction",
        sub1 == minus_1_over_n && sub2 == minus_1_over_n,
        format!("C1.(K+C1+C2) = {sub1}, C2.(K+C1+C2) = {sub2}"),
    );

    // target type: kappa = nm/(m, b+1), nu = (C1-C2)^2 kappa,
    // d = nu m / (nu m, kappa)
    let kappa = n * m / gcd(m, b + 1);
    let nu_rat = &diff_sq * rat_int(kappa as i64);
    let (cond_nu_holds, target_d) = if nu_rat.is_integer() {
        let nu_abs = nu_rat.to_integer().magnitude().clone();
        match u64::try_from(&nu_abs) {
            Ok(nu) => {
                let d = nu * m / gcd(nu * m, kappa);
                (true, Some(d))
            }
            Err(_) => (false, None),
        }
    } else {
        (false, None)
    };
    let cond_nu = Condition::new(
        "nonnormal2.nu",
        cond_nu_holds,
        match target_d {
            Some(d) => format!("kappa = {kappa}, nu = {nu_rat}, d = {d}"),
            None => format!("kappa = {kappa}, nu = {nu_rat} not integral"),
        },
    );

    Ok(NeighborhoodVerdict {
        class_tag: ClassTag::NonnormalNss,
        conditions: vec![
            cond3,
            cond4,
            cond_int,
            cond_smooth,
            cond_cartier,
            cond_sub,
            cond_nu,
        ],
        index_n: n,
        multiplicity_mu: mu,
        target_d,
        s_position: None,
        extras: Extras::Nonnormal {
            n,
            a,
            m,
            b,
            x1,
            x2,
            junction_families,
        },
    })
}

/// Fundamental-cycle invariants of a degenerate-cusp exceptional chain:
/// per-curve `F_i . Delta = E_i^2 + 2 - E_i . B`, the cycle square, and
/// the multiplicity and embedding dimension derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuspInvariants {
    pub f_dot_delta: Vec<i64>,
    pub delta_sq: i64,
    pub mult: u64,
    pub embdim: u64,
}

pub fn cusp_invariants(chain_sq: &[i64], double_branches: &[u64]) -> Result<CuspInvariants> {
    if chain_sq.is_empty() || chain_sq.len() != double_branches.len() {
        return Err(Error::Degenerate(
            "cusp invariants need a nonempty chain with one branch count per curve".into(),
        ));
    }
    let f_dot_delta = chain_sq
        .iter()
        .zip(double_branches)
        .map(|(&e2, &b)| e2 + 2 - b as i64)
        .collect();
    let delta_sq: i64 = chain_sq.iter().sum::<i64>() + 2 * (chain_sq.len() as i64 - 1);
    let mult = 2.max(-delta_sq) as u64;
    let embdim = 3.max(-delta_sq) as u64;
    Ok(CuspInvariants {
        f_dot_delta,
        delta_sq,
        mult,
        embdim,
    })
}

/// Whether a cycle square is in the range a terminal one-parameter total
/// space allows for its degenerate cusps.
pub fn delta_sq_admissible(delta_sq: i64) -> bool {
    (-4..=-1).contains(&delta_sq)
}

/// Existence of a semistable contraction datum over a section A_m met at
/// position `s`: solves `2k + 3k' = m + 1`, `k + k' = s` and returns the
/// axial multiplicities when both are positive.
pub fn ca2_existence(m: u64, s: u64) -> Option<(u64, u64)> {
    let k = 3 * s as i64 - m as i64 - 1;
    let kp = s as i64 - k;
    (k >= 1 && kp >= 1).then_some((k as u64, kp as u64))
}

/// Expected intersection numbers of a semistable datum, for cross-checks
/// against the resolution-side computation.
pub fn semistable_expected(p: &TDecomposition, q: &TDecomposition) -> (Rat, Rat) {
    match classify_semistable(p, q).extras {
        Extras::Semistable { kz_c, c_sq, .. } => (kz_c, c_sq),
        _ => unreachable!(),
    }
}

/// Picks, among the decomposition choices of two high-index points, a
/// pair passing all semistable conditions; falls back to the first
/// combination when none does.
pub fn best_semistable_pair(
    point1: &CyclicQuotient,
    point2: &CyclicQuotient,
) -> Option<(TDecomposition, TDecomposition, NeighborhoodVerdict)> {
    let decs1 = point1.t_decompositions();
    let decs2 = point2.t_decompositions();
    let mut fallback = None;
    for ordered in [true, false] {
        let (left, right) = if ordered {
            (&decs1, &decs2)
        } else {
            (&decs2, &decs1)
        };
        for (p, _) in left {
            for (q, _) in right {
                let verdict = classify_semistable(p, q);
                if verdict.passed() {
                    return Some((*p, *q, verdict));
                }
                if fallback.is_none() {
                    fallback = Some((*p, *q, verdict));
                }
            }
        }
    }
    fallback
}
