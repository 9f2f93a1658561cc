//! Continued-fraction invariants of star arms and the multiplicity
//! identities they control.
//!
//! An arm with weights `-e_1, …, -e_k` (center outward, all `e_j ≥ 2`)
//! carries the negative continued fraction `[e_1; e_2; …; e_k] =
//! e_1 - 1/(e_2 - 1/(…))`. The suffix values `p_j/q_j` obey the integer
//! recurrence `p_j = e_j p_{j+1} - p_{j+2}` with `p_{k+1} = 1, p_{k+2} = 0`
//! and `q_j = p_{j+1}`, which ties the vanishing of a cycle's products
//! along the arm to exact divisibility of its multiplicities.

use crate::graph::{StarDecomposition, WeightedGraph};
use crate::laufer::{self, Cycle, LauferError};
use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArmError {
    #[error("continued fractions need at least one coefficient")]
    Empty,
    #[error("zero denominator while evaluating the continued fraction")]
    ZeroDenominator,
    #[error("arm weight at position {position} is {weight}; minimal arms need every weight ≤ -2")]
    NonMinimalArm { position: usize, weight: i64 },
    #[error("arithmetic overflow while folding the continued fraction")]
    Overflow,
    #[error("graph is not star-shaped")]
    NotStarShaped,
    #[error(transparent)]
    Laufer(#[from] LauferError),
}

/// Reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fraction {
    pub num: i128,
    pub den: i128,
}

impl Fraction {
    pub fn new(num: i128, den: i128) -> Result<Self, ArmError> {
        if den == 0 {
            return Err(ArmError::ZeroDenominator);
        }
        let sign = if den < 0 { -1 } else { 1 };
        let g = num.gcd(&den);
        let g = if g == 0 { 1 } else { g };
        Ok(Fraction { num: sign * num / g, den: sign * den / g })
    }
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Evaluates `[c_1; c_2; …] = c_1 - 1/(c_2 - 1/(…))` by folding from the
/// right with exact fraction arithmetic.
pub fn cont_frac(coeffs: &[i64]) -> Result<Fraction, ArmError> {
    let (&last, init) = coeffs.split_last().ok_or(ArmError::Empty)?;
    let mut value = Fraction::new(last as i128, 1)?;
    for &c in init.iter().rev() {
        if value.num == 0 {
            return Err(ArmError::ZeroDenominator);
        }
        // c - 1/(p/q) = (c p - q)/p
        let num = (c as i128)
            .checked_mul(value.num)
            .and_then(|cp| cp.checked_sub(value.den))
            .ok_or(ArmError::Overflow)?;
        value = Fraction::new(num, value.num)?;
    }
    Ok(value)
}

/// Continued fractions of every suffix of an arm, computed center-outward
/// from the weights via the integer recurrence (never by folding).
/// `fractions[j]` is the value of the arm starting at position `j`.
pub fn arm_fractions(weights: &[i64]) -> Result<Vec<Fraction>, ArmError> {
    let k = weights.len();
    for (position, &weight) in weights.iter().enumerate() {
        if weight > -2 {
            return Err(ArmError::NonMinimalArm { position, weight });
        }
    }
    // p[j] for j = 0..k+2, with p[k] = 1, p[k+1] = 0
    let mut p = vec![0i128; k + 2];
    p[k] = 1;
    for j in (0..k).rev() {
        let e = -(weights[j] as i128);
        p[j] = e
            .checked_mul(p[j + 1])
            .and_then(|ep| ep.checked_sub(p[j + 2]))
            .ok_or(ArmError::Overflow)?;
    }
    (0..k).map(|j| Fraction::new(p[j], p[j + 1])).collect()
}

/// Per-arm record: the positive weights `e`, the suffix numerators `p` and
/// denominators `q`, the multiplicity at the arm's end, and whether the
/// divisibility identities hold on this arm for the cycle under test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArmReport {
    pub arm: usize,
    pub e: Vec<i64>,
    pub p: Vec<i128>,
    pub q: Vec<i128>,
    pub end_mult: i64,
    pub identity: bool,
}

/// Result of [`check_multeq`]: both sides of the equivalence, per arm and
/// overall.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityCheck {
    pub arms: Vec<ArmReport>,
    pub arm_dots_zero: bool,
    pub identities_hold: bool,
    pub equivalent: bool,
}

/// Checks, for the given cycle, that "every arm vertex has product zero"
/// holds exactly when the multiplicity identities hold: with `m` the center
/// multiplicity and `m_j` the multiplicities along an arm of suffix
/// numerators `p_j`, the identities are `m = m_end · p_1` and
/// `m_j = m_end · p_{j+1}` for every `j`. `equivalent` reports whether the
/// two sides agree for this cycle.
pub fn check_multeq(
    g: &WeightedGraph,
    star: &StarDecomposition,
    z: &Cycle,
) -> Result<MultiplicityCheck, ArmError> {
    if z.len() != g.vertex_count() {
        return Err(LauferError::LengthMismatch { expected: g.vertex_count(), got: z.len() }.into());
    }
    let m = z.get(star.center);
    let mut arms = Vec::with_capacity(star.arms.len());
    let mut dots_zero = true;
    let mut identities = true;

    for (index, arm) in star.arms.iter().enumerate() {
        let e: Vec<i64> = arm.iter().map(|&v| -g.weight(v)).collect();
        let weights: Vec<i64> = arm.iter().map(|&v| g.weight(v)).collect();
        let fractions = arm_fractions(&weights)?;
        let p: Vec<i128> = fractions.iter().map(|f| f.num).collect();
        let q: Vec<i128> = fractions.iter().map(|f| f.den).collect();
        let end_mult = z.get(*arm.last().expect("arms are nonempty"));

        let arm_dots_zero = arm
            .iter()
            .all(|&v| laufer::dot(g, z, v).expect("cycle length checked by caller") == 0);

        let mut identity = (m as i128) == (end_mult as i128) * p[0];
        for (j, &v) in arm.iter().enumerate() {
            let expected = if j + 1 < p.len() { p[j + 1] } else { 1 };
            identity &= (z.get(v) as i128) == (end_mult as i128) * expected;
        }

        dots_zero &= arm_dots_zero;
        identities &= identity;
        arms.push(ArmReport { arm: index, e, p, q, end_mult, identity });
    }

    Ok(MultiplicityCheck {
        arms,
        arm_dots_zero: dots_zero,
        identities_hold: identities,
        equivalent: dots_zero == identities,
    })
}

/// Result of [`check_lcm_property`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LcmCheck {
    pub center_mult: i64,
    pub arm_p: Vec<i128>,
    pub lcm: i128,
    pub holds: bool,
}

/// Necessary condition satisfied by the one-node cone-like graphs: the
/// center multiplicity of the minimal cycle equals the least common
/// multiple of the arm numerators `p_i`. This is a filter, never a
/// sufficient test.
pub fn check_lcm_property(g: &WeightedGraph, star: &StarDecomposition) -> Result<LcmCheck, ArmError> {
    let trace = laufer::laufer_zmin(g)?;
    let mut arm_p = Vec::with_capacity(star.arms.len());
    for arm in &star.arms {
        let weights: Vec<i64> = arm.iter().map(|&v| g.weight(v)).collect();
        arm_p.push(arm_fractions(&weights)?[0].num);
    }
    let lcm = arm_p.iter().fold(1i128, |acc, &p| acc.lcm(&p));
    let center_mult = trace.zmin.get(star.center);
    Ok(LcmCheck { center_mult, arm_p, lcm, holds: (center_mult as i128) == lcm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::star_decomposition;

    fn frac(num: i128, den: i128) -> Fraction {
        Fraction::new(num, den).unwrap()
    }

    #[test]
    fn cont_frac_examples() {
        assert_eq!(cont_frac(&[2]).unwrap(), frac(2, 1));
        assert_eq!(cont_frac(&[2, 2, 2]).unwrap(), frac(4, 3));
        assert_eq!(cont_frac(&[3, 2]).unwrap(), frac(5, 2));
        assert!(matches!(cont_frac(&[]), Err(ArmError::Empty)));
    }

    #[test]
    fn k_twos_fold_to_k_plus_one_over_k() {
        for k in 1..=20i128 {
            let coeffs = vec![2i64; k as usize];
            assert_eq!(cont_frac(&coeffs).unwrap(), frac(k + 1, k));
        }
    }

    #[test]
    fn zero_denominator_is_reported() {
        // [1; 1] = 1 - 1/1 = 0, so [2; 1; 1] divides by zero
        assert!(matches!(cont_frac(&[2, 1, 1]), Err(ArmError::ZeroDenominator)));
    }

    #[test]
    fn suffix_recurrence_matches_direct_folding() {
        let arm = [-2, -2];
        let fractions = arm_fractions(&arm).unwrap();
        assert_eq!(fractions, vec![frac(3, 2), frac(2, 1)]);

        let arm = [-3, -2, -4];
        let fractions = arm_fractions(&arm).unwrap();
        for (j, f) in fractions.iter().enumerate() {
            let coeffs: Vec<i64> = arm[j..].iter().map(|&w| -w).collect();
            assert_eq!(*f, cont_frac(&coeffs).unwrap());
        }
    }

    #[test]
    fn denominators_shift_from_numerators() {
        let arm = [-2, -3, -2, -5];
        let fr = arm_fractions(&arm).unwrap();
        for j in 0..arm.len() - 1 {
            assert_eq!(fr[j].den, fr[j + 1].num);
        }
        assert_eq!(fr[arm.len() - 1].den, 1);
        for f in &fr {
            assert!(f.num > f.den && f.den >= 1);
            assert_eq!(f.num.gcd(&f.den), 1);
        }
    }

    #[test]
    fn minimality_is_required() {
        assert!(matches!(
            arm_fractions(&[-2, -1]),
            Err(ArmError::NonMinimalArm { position: 1, weight: -1 })
        ));
    }

    #[test]
    fn multeq_on_d4_zmin_holds_on_both_sides() {
        let g = WeightedGraph::parse("star center=-2 arms=[-2|-2|-2]").unwrap();
        let star = star_decomposition(&g).unwrap();
        let z = Cycle::new(vec![2, 1, 1, 1]).unwrap();
        let check = check_multeq(&g, &star, &z).unwrap();
        assert!(check.arm_dots_zero && check.identities_hold && check.equivalent);
        for report in &check.arms {
            assert_eq!(report.p, vec![2]);
            assert_eq!(report.q, vec![1]);
            assert_eq!(report.end_mult, 1);
            assert!(report.identity);
        }
    }

    #[test]
    fn multeq_on_d4_all_ones_fails_on_both_sides() {
        let g = WeightedGraph::parse("star center=-2 arms=[-2|-2|-2]").unwrap();
        let star = star_decomposition(&g).unwrap();
        let check = check_multeq(&g, &star, &Cycle::ones(4)).unwrap();
        assert!(!check.arm_dots_zero);
        assert!(!check.identities_hold);
        assert!(check.equivalent);
    }

    #[test]
    fn single_vertex_check_is_vacuous() {
        let g = WeightedGraph::parse("star center=-3 arms=[]").unwrap();
        let star = star_decomposition(&g).unwrap();
        let check = check_multeq(&g, &star, &Cycle::ones(1)).unwrap();
        assert!(check.arms.is_empty());
        assert!(check.equivalent);

        let lcm = check_lcm_property(&g, &star).unwrap();
        assert!(lcm.holds);
        assert_eq!(lcm.lcm, 1);
    }

    #[test]
    fn lcm_property_holds_on_d4() {
        let g = WeightedGraph::parse("star center=-2 arms=[-2|-2|-2]").unwrap();
        let star = star_decomposition(&g).unwrap();
        let check = check_lcm_property(&g, &star).unwrap();
        assert_eq!(check.center_mult, 2);
        assert_eq!(check.arm_p, vec![2, 2, 2]);
        assert_eq!(check.lcm, 2);
        assert!(check.holds);
    }

    #[test]
    fn arm_report_serialization_shape() {
        let g = WeightedGraph::parse("star center=-1 arms=[-2,-2,-2]").unwrap();
        let star = star_decomposition(&g).unwrap();
        let z = Cycle::new(vec![4, 3, 2, 1]).unwrap();
        let check = check_multeq(&g, &star, &z).unwrap();
        let json = serde_json::to_string(&check.arms[0]).unwrap();
        assert!(json.contains("\"arm\":0"));
        assert!(json.contains("\"p\":[4,3,2]"));
        assert!(json.contains("\"q\":[3,2,1]"));
        assert!(json.contains("\"end_mult\":1"));
    }
}
