//! The sectional criterion as an executable pipeline for hypersurface
//! germs in three or more variables.
//!
//! The criterion is one-sided: choose a projection whose kernel line misses
//! the tangent cone, take the discriminant of the resulting branched cover,
//! pick a line not inside the discriminant's cone, and slice the germ by
//! the plane over that line. A non-NE slice proves the germ non-NE; an NE
//! slice proves nothing, so exhausted searches end in Inconclusive, never
//! NE.
//!
//! All witness values in an emitted certificate are exact Gaussian
//! rationals, and `revalidate` recomputes every one of them from the
//! certificate's own fields.

use crate::cone::{germ_order, has_multiple_component};
use crate::curve::{plane_curve_ne, reduce_with_warning, Reason, Status, Verdict};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::gcd::squarefree_part;
use crate::poly::resultant::resultant;
use crate::poly::Polynomial;
use crate::scalar::ExactScalar;
use crate::tol;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A linear projection recorded by a coordinate change: the last column of
/// the matrix spans the kernel, and the first n-1 columns parametrize
/// the base.
#[derive(Debug, Clone)]
pub struct ProjectionFrame {
    pub kernel_direction: Vec<ExactScalar>,
    /// Invertible, last column = kernel_direction.
    pub change_of_coordinates: Matrix,
    /// Initial form of the germ at the kernel direction; nonzero is the
    /// generality witness.
    pub generality_value: ExactScalar,
}

/// Everything needed to re-check a slice-based non-NE proof.
#[derive(Debug, Clone)]
pub struct SliceCertificate {
    pub frame: ProjectionFrame,
    /// Reduced discriminant of the projected cover, in base variables
    /// s1..s(n-1).
    pub discriminant: Polynomial,
    pub line_direction: Vec<ExactScalar>,
    /// Initial form of the discriminant at the line direction; nonzero is
    /// the admissibility witness.
    pub admissibility_value: ExactScalar,
    /// The germ restricted to the plane over the line, in variables (s, u):
    /// s runs along the line, u along the kernel.
    pub slice_polynomial: Polynomial,
    pub slice_verdict: Verdict,
}

/// Search parameters for the sectional pipeline. `use_cone_shortcut`
/// controls whether a non-reduced tangent cone may settle the verdict
/// before any slicing happens.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub seed: u64,
    pub frame_attempts: u32,
    pub line_attempts: u32,
    pub precision: u32,
    pub use_cone_shortcut: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: tol::DEFAULT_SEED,
            frame_attempts: tol::SEARCH_FRAME_ATTEMPTS,
            line_attempts: tol::SEARCH_LINE_ATTEMPTS,
            precision: tol::DEFAULT_PRECISION,
            use_cone_shortcut: true,
        }
    }
}

fn unit_vector(dim: usize, j: usize) -> Vec<ExactScalar> {
    let mut v = vec![ExactScalar::zero(); dim];
    v[j] = ExactScalar::one();
    v
}

fn render_direction(v: &[ExactScalar]) -> String {
    let body: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("({})", body.join(", "))
}

/// Deterministic candidate directions: the standard basis first, then a
/// budget of pseudorandom Gaussian-integer vectors of height at most
/// `SEARCH_HEIGHT`, with the height doubled for each later third of the
/// budget. General and admissible directions are Zariski-dense, so small
/// heights almost always suffice; the doubling is a safety valve, not a
/// tuning knob.
struct DirectionSearch {
    rng: ChaCha8Rng,
    dim: usize,
    basis_next: usize,
    height: i64,
    per_batch: u32,
    drawn: u32,
    doublings_left: u32,
}

impl DirectionSearch {
    fn new(dim: usize, seed: u64, stream: u64, attempts: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let batches = tol::SEARCH_HEIGHT_DOUBLINGS + 1;
        DirectionSearch {
            rng,
            dim,
            basis_next: 0,
            height: tol::SEARCH_HEIGHT,
            per_batch: attempts.div_ceil(batches).max(1),
            drawn: 0,
            doublings_left: tol::SEARCH_HEIGHT_DOUBLINGS,
        }
    }

    fn next(&mut self) -> Option<Vec<ExactScalar>> {
        if self.basis_next < self.dim {
            self.basis_next += 1;
            return Some(unit_vector(self.dim, self.basis_next - 1));
        }
        loop {
            if self.drawn == self.per_batch {
                if self.doublings_left == 0 {
                    return None;
                }
                self.doublings_left -= 1;
                self.height *= 2;
                self.drawn = 0;
            }
            self.drawn += 1;
            let v: Vec<ExactScalar> = (0..self.dim)
                .map(|_| {
                    let re = self.rng.gen_range(-self.height..=self.height);
                    let im = self.rng.gen_range(-self.height..=self.height);
                    ExactScalar::from_int(re) + ExactScalar::from_int(im) * ExactScalar::i()
                })
                .collect();
            if v.iter().any(|c| !c.is_zero()) {
                return Some(v);
            }
        }
    }
}

/// Test a kernel direction for generality: the initial form must not
/// vanish at it. On success the coordinate change puts `v` last and keeps
/// the standard basis vectors away from its pivot coordinate.
pub fn is_general(f: &Polynomial, v: &[ExactScalar]) -> Result<Option<ProjectionFrame>> {
    let d = germ_order(f)?;
    let n = f.num_vars();
    if v.len() != n {
        return Err(Error::structural(
            "kernel direction has the wrong dimension",
        ));
    }
    if v.iter().all(|c| c.is_zero()) {
        return Err(Error::domain("kernel direction is the zero vector"));
    }
    let value = f.homogeneous_part(d).evaluate(v)?;
    if value.is_zero() {
        return Ok(None);
    }
    let pivot = v
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero vector has a pivot");
    let mut columns: Vec<Vec<ExactScalar>> = (0..n)
        .filter(|&j| j != pivot)
        .map(|j| unit_vector(n, j))
        .collect();
    columns.push(v.to_vec());
    let m = Matrix::from_columns(&columns)?;
    debug_assert!(!m.det().is_zero());
    Ok(Some(ProjectionFrame {
        kernel_direction: v.to_vec(),
        change_of_coordinates: m,
        generality_value: value,
    }))
}

/// First general frame in the deterministic search order.
pub fn find_general_projection(f: &Polynomial, seed: u64, attempts: u32) -> Result<ProjectionFrame> {
    germ_order(f)?;
    let mut search = DirectionSearch::new(f.num_vars(), seed, 0, attempts);
    let mut tried = 0u32;
    while let Some(v) = search.next() {
        tried += 1;
        if let Some(frame) = is_general(f, &v)? {
            return Ok(frame);
        }
    }
    Err(Error::precondition(format!(
        "no general projection found after {tried} candidates; the initial \
         form vanished at every direction tried, which cannot happen for a \
         nonzero germ unless the candidate budget is far too small"
    )))
}

/// Base variable names s1..s(dim) for discriminants.
fn base_vars(dim: usize) -> Vec<String> {
    (1..=dim).map(|k| format!("s{k}")).collect()
}

/// Rebuild a polynomial whose last variable no longer occurs onto the base
/// variable list s1..s(n-1).
fn onto_base_vars(p: &Polynomial) -> Polynomial {
    let n = p.num_vars();
    let vars = base_vars(n - 1);
    let terms: Vec<(Vec<u32>, ExactScalar)> = p
        .terms()
        .map(|(m, c)| {
            debug_assert_eq!(m.0[n - 1], 0);
            (m.0[..n - 1].to_vec(), c.clone())
        })
        .collect();
    Polynomial::from_terms(&vars, terms).expect("projected terms are valid")
}

/// Reduced discriminant of the cover induced by the frame: the squarefree
/// part of Res_u(f(Mx), d/du f(Mx)) with u the last coordinate, written in
/// base variables s1..s(n-1). Its zero set contains the ramification
/// locus; extra components only shrink the admissible set, which keeps
/// every downstream bound valid.
pub fn discriminant(f: &Polynomial, frame: &ProjectionFrame) -> Result<Polynomial> {
    let g = f.linear_substitute(&frame.change_of_coordinates)?;
    let u = f.num_vars() - 1;
    let res = resultant(&g, &g.partial_derivative(u)?, u)?;
    if res.is_zero() {
        return Err(Error::domain(
            "vanishing discriminant: the germ is not reduced or the kernel \
             line lies inside it",
        ));
    }
    Ok(onto_base_vars(&squarefree_part(&res)?))
}

/// Admissibility of a line direction for a discriminant: the witness is
/// the initial form of the discriminant evaluated at the direction,
/// returned exactly when nonzero. By homogeneity this single evaluation
/// decides whether the line sits inside the discriminant's cone.
pub fn is_admissible_line(delta: &Polynomial, w: &[ExactScalar]) -> Result<Option<ExactScalar>> {
    if delta.is_zero() {
        return Err(Error::domain("zero discriminant has no admissible lines"));
    }
    if w.iter().all(|c| c.is_zero()) {
        return Err(Error::domain("line direction is the zero vector"));
    }
    if w.len() != delta.num_vars() {
        return Err(Error::structural("line direction has the wrong dimension"));
    }
    let d = delta.order_at_origin().expect("nonzero polynomial");
    let value = delta.homogeneous_part(d).evaluate(w)?;
    Ok(if value.is_zero() { None } else { Some(value) })
}

/// The germ restricted to the plane over the line: substitute the base
/// coordinates by s*w and the kernel coordinate by u.
fn slice_polynomial(g: &Polynomial, w: &[ExactScalar]) -> Result<Polynomial> {
    let svars: Vec<String> = vec!["s".to_string(), "u".to_string()];
    let s = Polynomial::variable(&svars, 0)?;
    let u = Polynomial::variable(&svars, 1)?;
    let n = g.num_vars();
    let images: Vec<Polynomial> = (0..n)
        .map(|j| if j + 1 == n { u.clone() } else { s.scale(&w[j]) })
        .collect();
    g.substitute(&images)
}

/// The sectional non-NE test. Pipeline: smoothness shortcut, tangent-cone
/// multiplicity shortcut (optional), then the frame/line/slice search.
/// Never concludes NE for a singular germ: a verdict of NE can only come
/// from the smoothness shortcut.
pub fn sectional_test(f: &Polynomial, config: &SearchConfig) -> Result<Verdict> {
    if f.num_vars() < 3 {
        return Err(Error::structural(
            "sectional test expects at least three variables; use the plane \
             curve decision in two",
        ));
    }
    germ_order(f)?;
    let mut warnings = Vec::new();
    let f = reduce_with_warning(f, &mut warnings)?;
    if f.order_at_origin()? == 1 {
        return Ok(Verdict::ne(Reason::Smooth).with_warnings(warnings));
    }
    if config.use_cone_shortcut {
        if let Some(witness) = has_multiple_component(&f)? {
            return Ok(
                Verdict::non_ne(Reason::MultipleConeComponent { witness }).with_warnings(warnings)
            );
        }
    }

    let n = f.num_vars();
    let mut log = Vec::new();
    let mut frames = DirectionSearch::new(n, config.seed, 0, config.frame_attempts);
    let mut frame_index = 0u64;
    while let Some(v) = frames.next() {
        frame_index += 1;
        let Some(frame) = is_general(&f, &v)? else {
            log.push(format!(
                "kernel {}: inside the tangent cone, rejected",
                render_direction(&v)
            ));
            continue;
        };
        let delta = discriminant(&f, &frame)?;
        let g = f.linear_substitute(&frame.change_of_coordinates)?;
        let mut admissible = 0u32;
        let mut sliced: Vec<&str> = Vec::new();
        let mut lines = DirectionSearch::new(n - 1, config.seed, frame_index, config.line_attempts);
        while let Some(w) = lines.next() {
            let Some(value) = is_admissible_line(&delta, &w)? else {
                continue;
            };
            admissible += 1;
            let slice = slice_polynomial(&g, &w)?;
            if slice.is_zero() {
                sliced.push("degenerate (plane inside the germ)");
                continue;
            }
            let verdict = plane_curve_ne(&slice)?;
            if verdict.status == Status::NonNE {
                let certificate = SliceCertificate {
                    frame,
                    discriminant: delta,
                    line_direction: w,
                    admissibility_value: value,
                    slice_polynomial: slice,
                    slice_verdict: verdict,
                };
                return Ok(
                    Verdict::non_ne(Reason::SliceWitness(Box::new(certificate)))
                        .with_warnings(warnings),
                );
            }
            sliced.push("NE slice");
        }
        log.push(format!(
            "kernel {}: general (value {}), discriminant of degree {}, {} \
             admissible lines, slices: [{}]",
            render_direction(&frame.kernel_direction),
            frame.generality_value,
            delta.total_degree().unwrap_or(0),
            admissible,
            sliced.join(", ")
        ));
    }
    Ok(Verdict::inconclusive(Reason::ExhaustedSearch { log }).with_warnings(warnings))
}

/// The Pham-Brieskorn shortcut: sorted exponents with 1 < k1 < k2 <= ...
/// <= kn prove non-NE outright; two variables defer to the plane curve
/// decision; anything else is Inconclusive because the hypothesis fails.
pub fn brieskorn_test(exponents: &[u32], coefficients: &[ExactScalar]) -> Result<Verdict> {
    if exponents.len() < 2 {
        return Err(Error::domain("need at least two exponents"));
    }
    if exponents.len() != coefficients.len() {
        return Err(Error::structural(
            "one coefficient per exponent is required",
        ));
    }
    if exponents.iter().any(|&k| k < 1) {
        return Err(Error::domain("exponents must be at least 1"));
    }
    if coefficients.iter().any(|c| c.is_zero()) {
        return Err(Error::domain("coefficients must be nonzero"));
    }
    if exponents.len() == 2 {
        let vars: Vec<String> = vec!["x".to_string(), "y".to_string()];
        let terms = vec![
            (vec![exponents[0], 0], coefficients[0].clone()),
            (vec![0, exponents[1]], coefficients[1].clone()),
        ];
        let f = Polynomial::from_terms(&vars, terms)?;
        return plane_curve_ne(&f);
    }
    let mut sorted = exponents.to_vec();
    sorted.sort_unstable();
    if 1 < sorted[0] && sorted[0] < sorted[1] {
        Ok(Verdict::non_ne(Reason::BrieskornExponents { sorted }))
    } else {
        Ok(Verdict::inconclusive(Reason::ExhaustedSearch {
            log: vec![format!(
                "sorted exponents {sorted:?} do not satisfy 1 < k1 < k2; the \
                 criterion makes no claim either way"
            )],
        }))
    }
}

/// Re-check every witness value of a certificate against the germ it
/// claims to certify. Returns the list of checks performed; any mismatch
/// is an error naming the failing field.
pub fn revalidate(f: &Polynomial, certificate: &SliceCertificate) -> Result<Vec<String>> {
    let mut checks = Vec::new();
    let mut warnings = Vec::new();
    let f = reduce_with_warning(f, &mut warnings)?;
    let d = germ_order(&f)?;
    let n = f.num_vars();

    let m = &certificate.frame.change_of_coordinates;
    if m.size() != n {
        return Err(Error::precondition(
            "certificate frame size does not match the germ",
        ));
    }
    if m.det().is_zero() {
        return Err(Error::precondition(
            "certificate coordinate change is singular",
        ));
    }
    if m.column(n - 1) != certificate.frame.kernel_direction {
        return Err(Error::precondition(
            "certificate matrix's last column is not the kernel direction",
        ));
    }
    checks.push("coordinate change invertible with the kernel as last column".to_string());

    let generality = f
        .homogeneous_part(d)
        .evaluate(&certificate.frame.kernel_direction)?;
    if generality != certificate.frame.generality_value || generality.is_zero() {
        return Err(Error::precondition(
            "generality value does not re-verify: the kernel direction is \
             not general or the stored value is stale",
        ));
    }
    checks.push(format!("generality value {generality} re-verified"));

    let delta = discriminant(&f, &certificate.frame)?;
    if delta != certificate.discriminant {
        return Err(Error::precondition(
            "stored discriminant does not match the recomputed one",
        ));
    }
    checks.push("discriminant re-verified".to_string());

    let admissibility = match is_admissible_line(&delta, &certificate.line_direction)? {
        Some(value) if value == certificate.admissibility_value => value,
        _ => {
            return Err(Error::precondition(
                "admissibility value does not re-verify: the line sits \
                 inside the discriminant's cone or the stored value is stale",
            ))
        }
    };
    checks.push(format!("admissibility value {admissibility} re-verified"));

    let g = f.linear_substitute(m)?;
    let slice = slice_polynomial(&g, &certificate.line_direction)?;
    if slice != certificate.slice_polynomial {
        return Err(Error::precondition(
            "stored slice polynomial does not match the recomputed one",
        ));
    }
    checks.push("slice polynomial re-verified".to_string());

    let verdict = plane_curve_ne(&slice)?;
    if verdict.status != Status::NonNE || certificate.slice_verdict.status != Status::NonNE {
        return Err(Error::precondition(
            "slice verdict does not re-verify as non-NE",
        ));
    }
    checks.push("slice re-decided as non-NE".to_string());
    Ok(checks)
}
