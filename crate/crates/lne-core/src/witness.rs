//! Numeric corroboration of non-NE verdicts: a pair of arcs on the curve
//! approaching the origin with a common tangent, sampled outer distance,
//! a certified inner lower bound through the discriminant, and the fitted
//! blow-up exponent of their ratio.
//!
//! The symbolic verdict is the proof; the report produced here shows the
//! metric degeneration happening at the predicted rate. The ratio column
//! is a certified lower bound for d_X / d, so a diverging fit cannot be a
//! numerical artifact of the sampling.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::ball::CBall;
use crate::curve::{plane_curve_ne, reduce_with_warning, tangents_equal, Status};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::poly::gcd::squarefree_part;
use crate::poly::resultant::resultant;
use crate::poly::uni::UniPoly;
use crate::poly::Polynomial;
use crate::puiseux::{puiseux_expand, separation_exponent, Chart, PuiseuxBranch};
use crate::roots::all_roots;
use crate::scalar::ExactScalar;
use crate::tol;

/// Sampling parameters for witness reports.
#[derive(Debug, Clone)]
pub struct WitnessConfig {
    pub precision: u32,
    /// Truncation exponent passed to the series expansion.
    pub truncation: i64,
    pub samples: usize,
    pub t_min: f64,
    pub t_max: f64,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        WitnessConfig {
            precision: tol::default_precision(),
            truncation: tol::DEFAULT_TRUNCATION,
            samples: tol::WITNESS_SAMPLES,
            t_min: tol::WITNESS_T_MIN,
            t_max: tol::WITNESS_T_MAX,
        }
    }
}

/// Two branches of one plane curve parametrized over the same base segment
/// [0, epsilon] in the direction `direction_w`, with their separation
/// exponent q: the first exponent where the two series differ.
///
/// Pairs built by [`build_arc_pair`] always have q > 1 (conjugates of a
/// ramified branch, or two smooth branches sharing a tangent); pairs
/// assembled directly from branches may have q = 1 and serve as controls.
#[derive(Debug, Clone)]
pub struct ArcPair {
    pub branch1: PuiseuxBranch,
    pub branch2: PuiseuxBranch,
    pub epsilon: f64,
    /// Exact Gaussian rational of norm 1; the base point of both arcs at
    /// parameter t is t times this direction.
    pub direction_w: ExactScalar,
    pub separation_q: BigRational,
}

impl ArcPair {
    pub fn chart(&self) -> Chart {
        self.branch1.chart
    }

    /// The slope 1 - q that the ratio column should exhibit.
    pub fn predicted_slope(&self) -> BigRational {
        BigRational::one() - &self.separation_q
    }
}

/// Outcome of the ratio fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conclusion {
    /// The fitted slope is negative beyond its confidence radius: the inner
    /// to outer ratio grows without bound as t shrinks.
    RatioDiverges,
    Bounded,
    Inconclusive,
}

/// One row of the sample table. `ratio` is `inner_lower / outer`, a
/// certified lower bound on d_X / d at this t.
#[derive(Debug, Clone)]
pub struct SampleRow {
    pub t: f64,
    pub outer: f64,
    pub inner_lower: f64,
    pub inner_arclength: Option<f64>,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub samples: Vec<SampleRow>,
    pub fitted_slope: f64,
    pub confidence_radius: f64,
    pub predicted_slope: BigRational,
    pub conclusion: Conclusion,
    /// min over samples of d(t w, V(Delta)) / t; positive when the segment
    /// stays inside a cone missing the discriminant.
    pub conical_lower_bound: f64,
    pub warnings: Vec<String>,
}

fn base_var(chart: Chart) -> usize {
    match chart {
        Chart::YOverX => 0,
        Chart::XOverY => 1,
    }
}

fn fiber_var(chart: Chart) -> usize {
    1 - base_var(chart)
}

/// Reduced discriminant of the coordinate projection that the chart's
/// branches are parametrized by: the squarefree part of Res(f, df/dfiber),
/// a polynomial in the base variable alone.
pub fn projection_discriminant(f: &Polynomial, chart: Chart) -> Result<Polynomial> {
    if f.num_vars() != 2 {
        return Err(Error::structural(
            "projection discriminants are defined for plane curves",
        ));
    }
    let fv = fiber_var(chart);
    if f.degree_in(fv).map_or(true, |d| d == 0) {
        return Err(Error::domain(
            "the projection is not finite on the curve: the fiber variable does not occur",
        ));
    }
    let df = f.partial_derivative(fv)?;
    let res = resultant(f, &df, fv)?;
    if res.is_zero() {
        return Err(Error::domain(
            "vanishing discriminant: reduce the curve before sampling",
        ));
    }
    squarefree_part(&res)
}

/// Find a witness pair on a non-NE plane curve: the first ramified branch
/// paired with its own conjugate, or else the first two smooth branches
/// sharing a tangent. Normally embedded curves are refused.
pub fn build_arc_pair(f: &Polynomial, config: &WitnessConfig) -> Result<ArcPair> {
    let mut warnings = Vec::new();
    let reduced = reduce_with_warning(f, &mut warnings)?;
    let verdict = plane_curve_ne(&reduced)?;
    if verdict.status != Status::NonNE {
        return Err(Error::precondition(
            "the curve is normally embedded: arc pairs witness only non-NE curves",
        ));
    }
    // A pair must separate before the truncation horizon; re-expand deeper
    // when the series still agree there.
    let mut truncation = config.truncation.max(2);
    let mut last = None;
    for _ in 0..3 {
        let attempt = select_pair(&reduced, truncation, config.precision).and_then(
            |(b1, b2)| arc_pair_from_branches(&reduced, b1, b2, config),
        );
        match attempt {
            Err(err @ Error::Precision { .. }) => {
                last = Some(err);
                truncation *= 2;
            }
            other => return other,
        }
    }
    Err(last.expect("loop ran at least once"))
}

fn select_pair(
    f: &Polynomial,
    truncation: i64,
    precision: u32,
) -> Result<(PuiseuxBranch, PuiseuxBranch)> {
    let horizon = BigRational::from_integer(BigInt::from(truncation));
    let branches = puiseux_expand(f, &horizon, precision)?;
    if let Some(b) = branches.iter().find(|b| b.ramification_index >= 2) {
        let partner = b.conjugate(1, precision)?;
        return Ok((b.clone(), partner));
    }
    for i in 0..branches.len() {
        for j in i + 1..branches.len() {
            if tangents_equal(&branches[i].tangent(), &branches[j].tangent(), precision)? {
                return Ok((branches[i].clone(), branches[j].clone()));
            }
        }
    }
    Err(Error::internal(
        "non-NE plane curve without a ramified branch or a same-tangent pair",
    ))
}

/// Assemble a pair from two explicitly chosen branches of `f`. Unlike
/// [`build_arc_pair`] this does not require the curve to be non-NE, so
/// transversal control pairs can be sampled too.
pub fn arc_pair_from_branches(
    f: &Polynomial,
    branch1: PuiseuxBranch,
    branch2: PuiseuxBranch,
    config: &WitnessConfig,
) -> Result<ArcPair> {
    if branch1.chart != branch2.chart {
        return Err(Error::structural(
            "arc pair branches must live in the same chart",
        ));
    }
    if branch1.ramification_index != branch2.ramification_index {
        return Err(Error::structural(
            "arc pair branches must share a base parametrization",
        ));
    }
    let separation_q = separation_exponent(&branch1, &branch2, config.precision)?;
    let (epsilon, direction_w) = clear_segment(f, branch1.chart, config.precision)?;
    Ok(ArcPair {
        branch1,
        branch2,
        epsilon,
        direction_w,
        separation_q,
    })
}

/// Shrink the segment below half the smallest nonzero discriminant root and
/// pick a unit direction whose ray certifiably avoids the nonzero roots.
fn clear_segment(f: &Polynomial, chart: Chart, precision: u32) -> Result<(f64, ExactScalar)> {
    let delta = projection_discriminant(f, chart)?;
    let uni = UniPoly::from_polynomial(&delta, base_var(chart))?;
    let mut epsilon = tol::WITNESS_EPSILON;
    let mut nonzero = Vec::new();
    for (root, _) in all_roots(&uni, precision)? {
        if root.is_exact_zero() {
            continue;
        }
        let ball = root.as_ball(precision);
        let low = ball.mag_lower(precision).to_f64();
        if low > 0.0 {
            epsilon = epsilon.min(low / 2.0);
            nonzero.push(ball);
        }
    }
    let direction = unit_candidates()
        .into_iter()
        .find(|w| nonzero.iter().all(|r| clears_ray(r, w, epsilon, precision)))
        .unwrap_or_else(ExactScalar::one);
    Ok((epsilon, direction))
}

/// Unit Gaussian rationals, exactly of norm 1: the four units and a few
/// Pythagorean directions off the axes.
fn unit_candidates() -> Vec<ExactScalar> {
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    vec![
        ExactScalar::one(),
        ExactScalar::i(),
        ExactScalar::new(r(3, 5), r(4, 5)),
        ExactScalar::new(r(3, 5), r(-4, 5)),
        -ExactScalar::one(),
        -ExactScalar::i(),
        ExactScalar::new(r(-3, 5), r(4, 5)),
        ExactScalar::new(r(-3, 5), r(-4, 5)),
        ExactScalar::new(r(5, 13), r(12, 13)),
        ExactScalar::new(r(5, 13), r(-12, 13)),
    ]
}

/// Certified test that a discriminant root stays off the closed ray through
/// `w`: either it sits beyond twice the segment length, or rotating it back
/// by `w` leaves it certifiably off the positive real axis.
fn clears_ray(root: &CBall, w: &ExactScalar, epsilon: f64, precision: u32) -> bool {
    if root.mag_lower(precision).to_f64() > 2.0 * epsilon {
        return true;
    }
    let back = root.mul(&CBall::from_exact(&w.conj(), precision), precision);
    let re_high = back.re().add(back.rad());
    if re_high.is_negative() {
        return true;
    }
    back.im().abs().sub(back.rad()).is_positive()
}

fn check_segment(ts: &[f64], epsilon: f64) -> Result<()> {
    for &t in ts {
        if !(t > 0.0 && t <= epsilon) {
            return Err(Error::domain(format!(
                "sample t = {t:e} outside the segment (0, {epsilon:e}]"
            )));
        }
    }
    Ok(())
}

/// The p-th root of the pair's direction, fixing which sheet of the base
/// root the parameter tau lives on.
fn direction_root(pair: &ArcPair, precision: u32) -> Result<CBall> {
    let w = CBall::from_exact(&pair.direction_w, precision);
    let p = pair.branch1.ramification_index;
    if p == 1 {
        Ok(w)
    } else {
        w.nth_root(p, precision)
    }
}

/// tau with tau^p = t w, as the real positive p-th root of t times `omega`.
fn tau_at(pair: &ArcPair, omega: &CBall, t: f64, precision: u32) -> Result<CBall> {
    let td = Dyadic::from_f64(t).ok_or_else(|| Error::domain("non-finite sample value"))?;
    let t_ball = CBall::new(td, Dyadic::zero(), Dyadic::zero());
    let p = pair.branch1.ramification_index;
    let root = if p == 1 { t_ball } else { t_ball.nth_root(p, precision)? };
    Ok(root.mul(omega, precision))
}

/// The series part of a branch at a complex ball tau. Mirrors the real
/// evaluation in the expansion module, with ball powers of tau instead.
fn eval_series_ball(branch: &PuiseuxBranch, tau: &CBall, precision: u32) -> CBall {
    let p = BigRational::from_integer(BigInt::from(branch.ramification_index));
    let mut acc = CBall::zero();
    let mut pow = CBall::one();
    let mut pow_exp: u64 = 0;
    for (exp, coeff) in &branch.series {
        let nu = (exp * &p).to_integer().to_u64().unwrap_or(0);
        while pow_exp < nu {
            pow = pow.mul(tau, precision);
            pow_exp += 1;
        }
        acc = acc.add(&coeff.as_ball(precision).mul(&pow, precision), precision);
    }
    acc
}

/// Euclidean distances between the two arc points over the base points t w.
/// Both arcs share the base coordinate exactly, so the distance is the gap
/// between the two series values; the reported number is the certified
/// upper bound of that gap.
pub fn outer_distance_samples(pair: &ArcPair, ts: &[f64], precision: u32) -> Result<Vec<f64>> {
    check_segment(ts, pair.epsilon)?;
    let omega = direction_root(pair, precision)?;
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        let tau = tau_at(pair, &omega, t, precision)?;
        let y1 = eval_series_ball(&pair.branch1, &tau, precision);
        let y2 = eval_series_ball(&pair.branch2, &tau, precision);
        out.push(y1.sub(&y2, precision).mag_upper(precision).to_f64());
    }
    Ok(out)
}

/// Certified lower bounds 2 d(t w, V(delta)) for the inner distance between
/// the two arc points. A sample landing on the discriminant within working
/// precision is skipped with a warning instead of reported as zero.
pub fn inner_lower_bound_samples(
    pair: &ArcPair,
    delta: &Polynomial,
    ts: &[f64],
    precision: u32,
    warnings: &mut Vec<String>,
) -> Result<Vec<Option<f64>>> {
    check_segment(ts, pair.epsilon)?;
    let uni = UniPoly::from_polynomial(delta, base_var(pair.chart()))?;
    match uni.degree() {
        None => return Err(Error::domain("zero discriminant")),
        Some(0) => {
            return Err(Error::domain(
                "the discriminant has no zeros: the curve is not singular at the origin",
            ))
        }
        Some(_) => {}
    }
    let roots = all_roots(&uni, precision)?;
    let w = CBall::from_exact(&pair.direction_w, precision);
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        let td = Dyadic::from_f64(t).ok_or_else(|| Error::domain("non-finite sample value"))?;
        let tw = w.mul(&CBall::new(td, Dyadic::zero(), Dyadic::zero()), precision);
        let mut dist = f64::INFINITY;
        for (root, _) in &roots {
            let gap = tw
                .sub(&root.as_ball(precision), precision)
                .mag_lower(precision)
                .to_f64();
            dist = dist.min(gap);
        }
        if dist > 0.0 {
            out.push(Some(2.0 * dist));
        } else {
            warnings.push(format!(
                "sample t = {t:e} meets the discriminant within working precision; skipped"
            ));
            out.push(None);
        }
    }
    Ok(out)
}

/// Coefficient table of a branch in double precision, for quadrature.
struct SeriesF64 {
    p: u32,
    terms: Vec<(u32, Complex64)>,
}

impl SeriesF64 {
    fn from_branch(branch: &PuiseuxBranch) -> SeriesF64 {
        let p = branch.ramification_index;
        let pr = BigRational::from_integer(BigInt::from(p));
        let terms = branch
            .series
            .iter()
            .map(|(exp, coeff)| {
                let nu = (exp * &pr).to_integer().to_u32().unwrap_or(u32::MAX);
                (nu, coeff.as_ball(64).mid_complex64())
            })
            .collect();
        SeriesF64 { p, terms }
    }

    fn point(&self, tau: Complex64) -> (Complex64, Complex64) {
        let x = tau.powu(self.p);
        let mut y = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut k = 0u32;
        for (nu, c) in &self.terms {
            while k < *nu {
                pow *= tau;
                k += 1;
            }
            y += c * pow;
        }
        (x, y)
    }
}

fn polyline_length(series: &SeriesF64, tau_end: Complex64, segments: usize) -> f64 {
    let mut prev = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut acc = 0.0;
    for k in 1..=segments {
        let tau = tau_end * (k as f64 / segments as f64);
        let next = series.point(tau);
        let dx = next.0 - prev.0;
        let dy = next.1 - prev.1;
        acc += (dx.norm_sqr() + dy.norm_sqr()).sqrt();
        prev = next;
    }
    acc
}

/// Inscribed-polyline arclength with step doubling until the correction is
/// below a relative tolerance; the last correction is added back so the
/// returned value sits on the upper side of the limit.
fn adaptive_polyline(series: &SeriesF64, tau_end: Complex64) -> Result<f64> {
    let mut segments = 32;
    let mut prev = polyline_length(series, tau_end, segments);
    while segments <= 512 {
        segments *= 2;
        let next = polyline_length(series, tau_end, segments);
        let gap = (next - prev).abs();
        if gap <= 1e-7 * next.max(f64::MIN_POSITIVE) {
            return Ok(next + gap);
        }
        prev = next;
    }
    Err(Error::Precision {
        message: "arclength quadrature did not converge; refine the truncation".to_string(),
        required_precision: 0,
    })
}

/// Arclength of both arcs from the origin out to parameter t, an upper-side
/// estimate of the inner distance: the shortest path between points of two
/// branches meeting only at the origin runs through the origin.
pub fn arclength_inner_estimate(pair: &ArcPair, ts: &[f64], precision: u32) -> Result<Vec<f64>> {
    check_segment(ts, pair.epsilon)?;
    let omega = direction_root(pair, precision)?.mid_complex64();
    let first = SeriesF64::from_branch(&pair.branch1);
    let second = SeriesF64::from_branch(&pair.branch2);
    let p = pair.branch1.ramification_index;
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        let tau_end = omega * t.powf(1.0 / p as f64);
        out.push(adaptive_polyline(&first, tau_end)? + adaptive_polyline(&second, tau_end)?);
    }
    Ok(out)
}

/// Least-squares slope of log(value) against log(t), with a confidence
/// radius of three standard errors. Requires at least 8 positive samples
/// spanning two decades of t.
pub fn fit_growth_exponent(samples: &[(f64, f64)]) -> Result<(f64, f64)> {
    if samples.len() < 8 {
        return Err(Error::domain("the growth fit needs at least 8 samples"));
    }
    let mut t_low = f64::INFINITY;
    let mut t_high = 0.0f64;
    for &(t, value) in samples {
        if !(t > 0.0) || !(value > 0.0) || !t.is_finite() || !value.is_finite() {
            return Err(Error::domain("growth fit samples must be positive and finite"));
        }
        t_low = t_low.min(t);
        t_high = t_high.max(t);
    }
    if t_high / t_low < 99.999 {
        return Err(Error::domain(
            "growth fit samples must span at least two decades of t",
        ));
    }
    let n = samples.len() as f64;
    let logs: Vec<(f64, f64)> = samples.iter().map(|&(t, v)| (t.ln(), v.ln())).collect();
    let x_bar = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let y_bar = logs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|(x, _)| (x - x_bar) * (x - x_bar)).sum();
    let sxy: f64 = logs.iter().map(|(x, y)| (x - x_bar) * (y - y_bar)).sum();
    let slope = sxy / sxx;
    let intercept = y_bar - slope * x_bar;
    let residual: f64 = logs
        .iter()
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let stderr = (residual / (n - 2.0) / sxx).sqrt();
    Ok((slope, 3.0 * stderr))
}

fn conclude(slope: f64, radius: f64) -> Conclusion {
    if radius > tol::WITNESS_RADIUS_LIMIT {
        Conclusion::Inconclusive
    } else if slope + radius < 0.0 {
        Conclusion::RatioDiverges
    } else {
        Conclusion::Bounded
    }
}

/// Logarithmically spaced sample values, ascending from t_min to t_max.
pub fn sample_grid(t_min: f64, t_max: f64, count: usize) -> Vec<f64> {
    debug_assert!(count >= 2 && t_min > 0.0 && t_max > t_min);
    (0..count)
        .map(|k| t_min * (t_max / t_min).powf(k as f64 / (count - 1) as f64))
        .collect()
}

/// Full pipeline: build the arc pair for a non-NE plane curve and sample it.
pub fn witness_report(f: &Polynomial, config: &WitnessConfig) -> Result<WitnessReport> {
    witness_with_pair(f, config).map(|(_, report)| report)
}

/// Like [`witness_report`], also handing back the pair that was sampled.
pub fn witness_with_pair(
    f: &Polynomial,
    config: &WitnessConfig,
) -> Result<(ArcPair, WitnessReport)> {
    tol::validate_precision(config.precision)?;
    let mut warnings = Vec::new();
    let reduced = reduce_with_warning(f, &mut warnings)?;
    let pair = tol::retry_with_precision(config.precision, |precision| {
        build_arc_pair(
            &reduced,
            &WitnessConfig {
                precision,
                ..config.clone()
            },
        )
    })?;
    let report = report_for_pair(&reduced, &pair, config, warnings)?;
    Ok((pair, report))
}

/// Sample an already constructed pair. Separate from [`witness_report`] so
/// control pairs on NE curves can be tabulated with the same machinery.
pub fn report_for_pair(
    f: &Polynomial,
    pair: &ArcPair,
    config: &WitnessConfig,
    mut warnings: Vec<String>,
) -> Result<WitnessReport> {
    let precision = config.precision;
    let delta = projection_discriminant(f, pair.chart())?;
    let t_high = config.t_max.min(pair.epsilon);
    if t_high <= config.t_min {
        return Err(Error::domain(format!(
            "empty sampling window: the segment ends at {:e} but sampling starts at {:e}",
            pair.epsilon, config.t_min
        )));
    }
    let ts = sample_grid(config.t_min, t_high, config.samples.max(2));
    let outer = outer_distance_samples(pair, &ts, precision)?;
    let inner = inner_lower_bound_samples(pair, &delta, &ts, precision, &mut warnings)?;
    let arcs = arclength_inner_estimate(pair, &ts, precision)?;
    let mut samples = Vec::with_capacity(ts.len());
    for (k, &t) in ts.iter().enumerate() {
        if let Some(inner_lower) = inner[k] {
            samples.push(SampleRow {
                t,
                outer: outer[k],
                inner_lower,
                inner_arclength: Some(arcs[k]),
                ratio: inner_lower / outer[k],
            });
        }
    }
    let points: Vec<(f64, f64)> = samples.iter().map(|row| (row.t, row.ratio)).collect();
    let (fitted_slope, raw_radius) = fit_growth_exponent(&points)?;
    let confidence_radius = raw_radius.max(tol::WITNESS_RADIUS_FLOOR);
    let conical_lower_bound = samples
        .iter()
        .map(|row| row.inner_lower / (2.0 * row.t))
        .fold(f64::INFINITY, f64::min);
    Ok(WitnessReport {
        samples,
        fitted_slope,
        confidence_radius,
        predicted_slope: pair.predicted_slope(),
        conclusion: conclude(fitted_slope, confidence_radius),
        conical_lower_bound,
        warnings,
    })
}
