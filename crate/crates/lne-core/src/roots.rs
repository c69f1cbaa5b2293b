//! Certified complex root isolation for univariate polynomials over Q(i).
//!
//! Three stages: cheap double-precision seeds (Durand-Kerner), Newton
//! polishing in ball arithmetic, and an a posteriori certification giving
//! each root a disk that provably contains exactly one root. The
//! certification is the classical bound: for any point `w`,
//! `min_i |w - z_i| <= deg(f) * |f(w) / f'(w)|`, so a disk of that radius
//! contains at least one root, and pairwise disjoint disks for all `deg(f)`
//! seeds pin down exactly one root each.
//!
//! Failure to certify at the working precision surfaces as a retryable
//! [`Error::Precision`]; callers go through
//! [`crate::tol::retry_with_precision`].

use num_complex::Complex64;
use num_rational::BigRational;

use crate::ball::{CBall, NumValue};
use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::poly::uni::{yun_decomposition, UniPoly};
use crate::scalar::ExactScalar;

/// Denominator bound for recognizing rational roots from double-precision
/// approximations.
const RECONSTRUCT_MAX_DEN: u64 = 1 << 16;

fn to_complex64(f: &UniPoly) -> Vec<Complex64> {
    f.coeffs()
        .iter()
        .map(|c| {
            let (re, im) = c.to_f64_pair();
            Complex64::new(re, im)
        })
        .collect()
}

fn horner64(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Durand-Kerner iteration: simultaneous first-order approximations to all
/// roots. Seeds only; every digit that matters is re-established by the
/// certification stage.
pub fn durand_kerner(f: &UniPoly) -> Vec<Complex64> {
    let deg = match f.degree() {
        Some(d) if d > 0 => d,
        _ => return vec![],
    };
    let mut coeffs = to_complex64(f);
    let lc = coeffs[deg];
    for c in coeffs.iter_mut() {
        *c /= lc;
    }
    // Cauchy bound keeps the seed circle outside no root.
    let bound = 1.0
        + coeffs[..deg]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let rot = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| bound * 0.7 * rot.powu(k as u32 + 1))
        .collect();
    for _ in 0..600 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    let d = z[i] - z[j];
                    denom *= if d.norm() < 1e-290 {
                        Complex64::new(1e-290, 1e-290)
                    } else {
                        d
                    };
                }
            }
            let step = horner64(&coeffs, z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 * bound {
            break;
        }
    }
    z
}

fn ball_coeffs(f: &UniPoly, prec: u32) -> Vec<CBall> {
    f.coeffs()
        .iter()
        .map(|c| CBall::from_exact(c, prec))
        .collect()
}

fn horner_ball(coeffs: &[CBall], z: &CBall, prec: u32) -> CBall {
    let mut acc = CBall::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(z, prec).add(c, prec);
    }
    acc
}

fn derivative_coeffs(coeffs: &[CBall], prec: u32) -> Vec<CBall> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale_exact(&ExactScalar::from_int(k as i64), prec))
        .collect()
}

/// Polish one seed and certify a disk around it.
fn certify_seed(
    fb: &[CBall],
    dfb: &[CBall],
    deg: u32,
    seed: Complex64,
    prec: u32,
) -> Result<CBall> {
    let work = prec + 32;
    let mut w = CBall::from_f64s(seed.re, seed.im)
        .ok_or_else(|| Error::internal("non-finite root seed"))?;
    let mut reach = 40u64;
    let mut steps = 2u32;
    while reach < work as u64 + 16 {
        reach *= 2;
        steps += 1;
    }
    for _ in 0..steps {
        let fv = horner_ball(fb, &w, work);
        let dv = horner_ball(dfb, &w, work);
        let delta = fv.div(&dv, work)?;
        w = w.sub(&delta, work).with_radius(Dyadic::zero());
    }
    let fv = horner_ball(fb, &w, work);
    let dv = horner_ball(dfb, &w, work);
    let deriv_low = dv.mag_lower(work);
    if !deriv_low.is_positive() {
        return Err(Error::Precision {
            message: "derivative bound lost during root certification".into(),
            required_precision: prec.saturating_mul(2),
        });
    }
    let radius = fv
        .mag_upper(work)
        .mul(&Dyadic::from_int(deg as i64))
        .div(&deriv_low, work, Round::Up)
        // Headroom so the true root is strictly interior.
        .mul_pow2(1);
    Ok(w.with_radius(radius))
}

/// Certified disks, one per root, for a squarefree polynomial; order follows
/// the Durand-Kerner output. Precondition: `f` squarefree (pairwise
/// disjointness fails otherwise, surfacing as a precision error).
pub fn certified_simple_roots(f: &UniPoly, prec: u32) -> Result<Vec<CBall>> {
    certified_roots_with_seeds(f, &durand_kerner(f), prec)
}

fn certified_roots_with_seeds(
    f: &UniPoly,
    seeds: &[Complex64],
    prec: u32,
) -> Result<Vec<CBall>> {
    let deg = match f.degree() {
        Some(d) if d > 0 => d as u32,
        _ => return Ok(vec![]),
    };
    debug_assert_eq!(seeds.len(), deg as usize);
    let fb = ball_coeffs(f, prec + 32);
    let dfb = derivative_coeffs(&fb, prec + 32);
    let disks: Vec<CBall> = seeds
        .iter()
        .map(|&s| certify_seed(&fb, &dfb, deg, s, prec))
        .collect::<Result<_>>()?;
    for i in 0..disks.len() {
        for j in (i + 1)..disks.len() {
            if !disks[i].is_disjoint(&disks[j]) {
                return Err(Error::Precision {
                    message: format!(
                        "root disks {i} and {j} overlap; roots not separated at {prec} bits"
                    ),
                    required_precision: prec.saturating_mul(2),
                });
            }
        }
    }
    Ok(disks)
}

/// Continued-fraction reconstruction of a rational from a double, with a
/// denominator cap. `None` when nothing inside the cap is convincingly close.
pub fn reconstruct_rational(x: f64, max_den: u64) -> Option<BigRational> {
    use num_bigint::BigInt;
    if !x.is_finite() {
        return None;
    }
    let (mut p_prev, mut q_prev) = (BigInt::from(1), BigInt::from(0));
    let (mut p, mut q) = (BigInt::from(x.floor() as i64), BigInt::from(1));
    let mut frac = x - x.floor();
    for _ in 0..64 {
        let err = x - rational_to_f64(&p, &q);
        if err.abs() < 1e-9 * (1.0 + x.abs()) {
            return Some(BigRational::new(p, q));
        }
        if frac.abs() < f64::EPSILON {
            break;
        }
        let next = 1.0 / frac;
        let a = next.floor();
        if !(0.0..=1e18).contains(&a) {
            break;
        }
        frac = next - a;
        let a = BigInt::from(a as i64);
        let p_new = &a * &p + &p_prev;
        let q_new = &a * &q + &q_prev;
        if q_new > BigInt::from(max_den) {
            break;
        }
        p_prev = p;
        q_prev = q;
        p = p_new;
        q = q_new;
    }
    let err = x - rational_to_f64(&p, &q);
    if err.abs() < 1e-9 * (1.0 + x.abs()) {
        Some(BigRational::new(p, q))
    } else {
        None
    }
}

fn rational_to_f64(p: &num_bigint::BigInt, q: &num_bigint::BigInt) -> f64 {
    crate::scalar::rat_to_f64(&BigRational::new(p.clone(), q.clone()))
}

/// All roots of a squarefree polynomial as exact Gaussian rationals.
/// `Err(Unsupported)` when any root fails to be one within the reconstruction
/// cap; exactness is verified by evaluation, never assumed.
pub fn exact_rational_roots(f: &UniPoly) -> Result<Vec<ExactScalar>> {
    let deg = match f.degree() {
        Some(d) if d > 0 => d,
        _ => return Ok(vec![]),
    };
    let mut remaining = f.monic();
    let mut found = Vec::new();
    for z in durand_kerner(f) {
        let re = reconstruct_rational(z.re, RECONSTRUCT_MAX_DEN);
        let im = reconstruct_rational(z.im, RECONSTRUCT_MAX_DEN);
        if let (Some(re), Some(im)) = (re, im) {
            let cand = ExactScalar::new(re, im);
            if found.contains(&cand) {
                continue;
            }
            if let Some(next) = remaining.deflate(&cand) {
                remaining = next;
                found.push(cand);
            }
        }
    }
    if found.len() == deg {
        Ok(found)
    } else {
        Err(Error::unsupported(format!(
            "root of `{:?}` is not a Gaussian rational with denominator <= {}",
            f.coeffs(),
            RECONSTRUCT_MAX_DEN
        )))
    }
}

/// Roots of an arbitrary nonzero polynomial with multiplicities. Simple
/// roots come back as certified balls (exact for degree-one factors);
/// multiple roots must be exact Gaussian rationals and are reported so.
pub fn all_roots(f: &UniPoly, prec: u32) -> Result<Vec<(NumValue, u32)>> {
    let mut out = Vec::new();
    for (factor, mult) in yun_decomposition(f)? {
        if factor.degree() == Some(1) {
            // x + c0: root is exactly -c0 (factor is monic).
            let root = -&factor.coeff(0);
            out.push((NumValue::Exact(root), mult));
        } else if mult == 1 {
            // Exact roots are preferred when the whole factor splits
            // rationally; otherwise fall back to certified disks.
            if let Ok(roots) = exact_rational_roots(&factor) {
                for root in roots {
                    out.push((NumValue::Exact(root), 1));
                }
                continue;
            }
            for disk in certified_simple_roots(&factor, prec)? {
                out.push((NumValue::Ball(disk), 1));
            }
        } else {
            for root in exact_rational_roots(&factor)? {
                out.push((NumValue::Exact(root), mult));
            }
        }
    }
    Ok(out)
}

/// The `p`-th roots of unity in index order: entry `k` is a certified disk
/// around `exp(2 pi i k / p)`.
pub fn roots_of_unity(p: u32, prec: u32) -> Result<Vec<CBall>> {
    if p == 0 {
        return Err(Error::domain("zeroth roots of unity"));
    }
    if p == 1 {
        return Ok(vec![CBall::one()]);
    }
    // Fourth roots of unity are Gaussian rationals; keeping them exact keeps
    // conjugate branches of low-ramification curves exact as well.
    if p == 2 || p == 4 {
        let units = [
            ExactScalar::one(),
            ExactScalar::i(),
            -ExactScalar::one(),
            -ExactScalar::i(),
        ];
        let step = if p == 2 { 2 } else { 1 };
        return Ok(units
            .iter()
            .step_by(step)
            .map(|u| CBall::from_exact(u, prec))
            .collect());
    }
    let mut coeffs = vec![ExactScalar::zero(); p as usize + 1];
    coeffs[0] = -ExactScalar::one();
    coeffs[p as usize] = ExactScalar::one();
    let f = UniPoly::new(coeffs);
    let seeds: Vec<Complex64> = (0..p)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / p as f64;
            Complex64::new(theta.cos(), theta.sin())
        })
        .collect();
    certified_roots_with_seeds(&f, &seeds, prec)
}
