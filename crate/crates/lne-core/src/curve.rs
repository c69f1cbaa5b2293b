//! NE decisions for curve germs.
//!
//! Plane curves are decided by the initial-form criterion: the germ is NE
//! exactly when the initial form is squarefree, that is, when the tangent
//! cone consists of distinct lines. Space curves given as branch lists are
//! decided by smoothness plus pairwise transversality. Both decisions are
//! complete; every verdict carries a checkable reason.

use crate::ball::NumValue;
use crate::cone::germ_order;
use crate::error::{Error, Result};
use crate::poly::gcd::{is_squarefree, squarefree_part};
use crate::poly::Polynomial;
use crate::puiseux::PuiseuxBranch;
use crate::slicer::SliceCertificate;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    NE,
    NonNE,
    Inconclusive,
}

/// The certificate behind a verdict.
#[derive(Debug, Clone)]
pub enum Reason {
    /// The germ is nonsingular at the origin.
    Smooth,
    /// Initial form squarefree: the tangent cone is a union of distinct
    /// lines (plane curves), or all branches are smooth and pairwise
    /// transversal (space curves).
    ReducedCone,
    /// A factor of the initial form with multiplicity at least two.
    NonReducedCone { witness: Polynomial },
    /// A branch with ramification index at least two.
    SingularBranch { branch: usize },
    /// Two distinct branches sharing a tangent direction.
    TangentBranchPair {
        first: usize,
        second: usize,
        tangent: (NumValue, NumValue),
    },
    /// The tangent cone of a higher-dimensional germ carries a component
    /// of multiplicity at least two.
    MultipleConeComponent { witness: Polynomial },
    /// An admissible plane section of the germ is a non-NE curve.
    SliceWitness(Box<SliceCertificate>),
    /// Sorted Brieskorn exponents satisfying 1 < k1 < k2 <= ... <= kn.
    BrieskornExponents { sorted: Vec<u32> },
    /// The one-sided search ran out of candidates; log of what was tried.
    ExhaustedSearch { log: Vec<String> },
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub status: Status,
    pub reason: Reason,
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn ne(reason: Reason) -> Self {
        Verdict {
            status: Status::NE,
            reason,
            warnings: vec![],
        }
    }

    pub fn non_ne(reason: Reason) -> Self {
        Verdict {
            status: Status::NonNE,
            reason,
            warnings: vec![],
        }
    }

    pub fn inconclusive(reason: Reason) -> Self {
        Verdict {
            status: Status::Inconclusive,
            reason,
            warnings: vec![],
        }
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }
}

/// Replace a non-reduced germ by its squarefree part, recording a warning.
/// Multiplicities of components never change NE status.
pub(crate) fn reduce_with_warning(
    f: &Polynomial,
    warnings: &mut Vec<String>,
) -> Result<Polynomial> {
    if is_squarefree(f)? {
        return Ok(f.clone());
    }
    let reduced = squarefree_part(f)?;
    warnings.push(format!(
        "input is not reduced; deciding its squarefree part {reduced}"
    ));
    Ok(reduced)
}

/// Complete NE decision for a reduced plane curve germ V(f) in C^2.
pub fn plane_curve_ne(f: &Polynomial) -> Result<Verdict> {
    if f.num_vars() != 2 {
        return Err(Error::structural(
            "plane curve decision expects exactly two variables",
        ));
    }
    germ_order(f)?;
    let mut warnings = Vec::new();
    let f = reduce_with_warning(f, &mut warnings)?;
    let d = f.order_at_origin().expect("nonzero germ");
    if d == 1 {
        return Ok(Verdict::ne(Reason::Smooth).with_warnings(warnings));
    }
    let init = f.homogeneous_part(d);
    let verdict = if is_squarefree(&init)? {
        Verdict::ne(Reason::ReducedCone)
    } else {
        let witness = init
            .div_exact(&squarefree_part(&init)?)
            .expect("squarefree part divides the form")
            .monic();
        Verdict::non_ne(Reason::NonReducedCone { witness })
    };
    Ok(verdict.with_warnings(warnings))
}

/// Projective equality test for two tangent directions. Exact zero of the
/// determinant means equal lines; a ball excluding zero means distinct; a
/// straddling ball is refused rather than guessed.
pub(crate) fn tangents_equal(
    a: &(NumValue, NumValue),
    b: &(NumValue, NumValue),
    precision: u32,
) -> Result<bool> {
    let det = a.0.mul(&b.1, precision).sub(&b.0.mul(&a.1, precision), precision);
    if det.is_exact_zero() {
        return Ok(true);
    }
    if det.is_nonzero() {
        return Ok(false);
    }
    Err(Error::Precision {
        message: "cannot decide whether two tangent directions coincide".to_string(),
        required_precision: precision * 2,
    })
}

/// Complete NE decision for a curve germ given by its branches: NE exactly
/// when every branch is smooth and the tangent directions are pairwise
/// distinct. Branches must be pairwise distinct and pass through the
/// origin.
pub fn space_curve_ne(branches: &[PuiseuxBranch], precision: u32) -> Result<Verdict> {
    if branches.is_empty() {
        return Err(Error::domain("empty branch list"));
    }
    for (i, branch) in branches.iter().enumerate() {
        if !branch.is_smooth()? {
            return Ok(Verdict::non_ne(Reason::SingularBranch { branch: i }));
        }
    }
    for i in 0..branches.len() {
        for j in i + 1..branches.len() {
            let ti = branches[i].tangent();
            let tj = branches[j].tangent();
            if tangents_equal(&ti, &tj, precision)? {
                return Ok(Verdict::non_ne(Reason::TangentBranchPair {
                    first: i,
                    second: j,
                    tangent: ti,
                }));
            }
        }
    }
    let reason = if branches.len() == 1 {
        Reason::Smooth
    } else {
        Reason::ReducedCone
    };
    Ok(Verdict::ne(reason))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::parse::parse_polynomial;
    use crate::puiseux::puiseux_expand;
    use crate::scalar::ExactScalar;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(text: &str) -> Polynomial {
        let vars = vec!["x".to_string(), "y".to_string()];
        parse_polynomial(text, Some(&vars)).unwrap()
    }

    fn plane(text: &str) -> Verdict {
        plane_curve_ne(&p(text)).unwrap()
    }

    fn space(text: &str) -> Verdict {
        let trunc = BigRational::from_integer(6.into());
        let branches = puiseux_expand(&p(text), &trunc, 128).unwrap();
        space_curve_ne(&branches, 128).unwrap()
    }

    #[test]
    fn two_transversal_lines_are_ne() {
        let v = plane("x^2 - y^2");
        assert_eq!(v.status, Status::NE);
        assert!(matches!(v.reason, Reason::ReducedCone));
    }

    #[test]
    fn tangential_pair_is_not_ne() {
        let v = plane("y^2 + x^4");
        assert_eq!(v.status, Status::NonNE);
        match v.reason {
            Reason::NonReducedCone { witness } => assert_eq!(witness, p("y")),
            other => panic!("unexpected reason {other:?}"),
        }
    }

    #[test]
    fn the_cusp_is_not_ne() {
        let v = plane("y^2 - x^3");
        assert_eq!(v.status, Status::NonNE);
        assert!(matches!(v.reason, Reason::NonReducedCone { .. }));
    }

    #[test]
    fn smooth_germs_are_ne() {
        let v = plane("y - x^2");
        assert_eq!(v.status, Status::NE);
        assert!(matches!(v.reason, Reason::Smooth));
    }

    #[test]
    fn non_reduced_input_is_reduced_with_a_warning() {
        // (x + y)^2 (x - y): squarefree part x^2 - y^2, which is NE.
        let s = p("x + y");
        let f = &(&s * &s) * &p("x - y");
        let v = plane_curve_ne(&f).unwrap();
        assert_eq!(v.status, Status::NE);
        assert_eq!(v.warnings.len(), 1);
        assert!(v.warnings[0].contains("not reduced"));
    }

    #[test]
    fn rejects_wrong_arity_and_non_germs() {
        let vars3: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let g = parse_polynomial("x^2 + y^2 - z^3", Some(&vars3)).unwrap();
        assert!(plane_curve_ne(&g).is_err());
        assert!(plane_curve_ne(&p("x + 1")).is_err());
    }

    #[test]
    fn transversal_branches_are_ne() {
        let v = space("x^2 - y^2");
        assert_eq!(v.status, Status::NE);
        assert!(matches!(v.reason, Reason::ReducedCone));
    }

    #[test]
    fn shared_tangent_branches_are_not_ne() {
        let v = space("y^2 + x^4");
        assert_eq!(v.status, Status::NonNE);
        match v.reason {
            Reason::TangentBranchPair { tangent, .. } => {
                assert!(tangent.0.as_exact().is_some_and(|s| s.is_one()));
                assert!(tangent.1.is_exact_zero());
            }
            other => panic!("unexpected reason {other:?}"),
        }
    }

    #[test]
    fn a_singular_branch_is_not_ne() {
        let v = space("y^2 - x^3");
        assert_eq!(v.status, Status::NonNE);
        assert!(matches!(v.reason, Reason::SingularBranch { branch: 0 }));
    }

    #[test]
    fn single_smooth_branch_is_ne() {
        let v = space("y - x^2");
        assert_eq!(v.status, Status::NE);
        assert!(matches!(v.reason, Reason::Smooth));
    }

    #[test]
    fn empty_branch_list_is_rejected() {
        assert!(space_curve_ne(&[], 128).is_err());
    }

    #[test]
    fn both_routes_agree_on_a_mixed_corpus() {
        for text in [
            "x^2 - y^2",
            "y^2 + x^4",
            "y^2 - x^3",
            "y - x^2",
            "x^3 - y^3",
            "y^2 - x^4",
            "x^2 - y^4",
            "x*y - y^3 - x^2 + x*y^2",
            "y^3 + x*y + x^5",
        ] {
            let f = p(text);
            let trunc = BigRational::from_integer(6.into());
            let branches = puiseux_expand(&f, &trunc, 128).unwrap();
            let by_cone = plane_curve_ne(&f).unwrap();
            let by_branches = space_curve_ne(&branches, 128).unwrap();
            assert_eq!(by_cone.status, by_branches.status, "{text}");
        }
    }

    #[test]
    fn verdict_is_scalar_invariant() {
        let c = ExactScalar::from_int(3) + ExactScalar::from_int(-2) * ExactScalar::i();
        for text in ["x^2 - y^2", "y^2 + x^4", "y - x^2"] {
            let f = p(text);
            let scaled = f.scale(&c);
            assert_eq!(
                plane_curve_ne(&f).unwrap().status,
                plane_curve_ne(&scaled).unwrap().status,
                "{text}"
            );
        }
    }

    #[test]
    fn verdict_survives_linear_coordinate_changes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let corpus = ["x^2 - y^2", "y^2 + x^4", "y^2 - x^3"];
        let mut checked = 0;
        while checked < 8 {
            let entries: Vec<Vec<ExactScalar>> = (0..2)
                .map(|_| {
                    (0..2)
                        .map(|_| {
                            ExactScalar::from_int(rng.gen_range(-3i64..=3))
                                + ExactScalar::from_int(rng.gen_range(-3i64..=3))
                                    * ExactScalar::i()
                        })
                        .collect()
                })
                .collect();
            let m = Matrix::new(entries).unwrap();
            if m.det().is_zero() {
                continue;
            }
            for text in corpus {
                let f = p(text);
                let g = f.linear_substitute(&m).unwrap();
                assert_eq!(
                    plane_curve_ne(&f).unwrap().status,
                    plane_curve_ne(&g).unwrap().status,
                    "{text} under {m:?}"
                );
            }
            checked += 1;
        }
    }
}
