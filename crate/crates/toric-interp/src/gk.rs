//! The slope criterion for triangles of width < 1 and the constructive
//! machinery behind it: the G-basis, the (n+1)x(n+1) interpolation matrix M,
//! its determinant law, the unique curve through the P and Q points, and the
//! witness polynomial that vanishes on every normalized support point except
//! the leftmost one — verified here by exact evaluation, never assumed.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{binom_u, count_integers, rat_floor, Int, Rat};
use crate::interp::{right_kernel, IntMatrix};
use crate::lattice::{
    gk_normalize, gk_setup_check, normalized_support, triangle_data, GkNormalization, LatticePoint,
    Triangle,
};

/// Everything the slope criterion looks at, plus the verdict. The verdict is
/// `setup_ok && w < 1 && right_count == n && !ns2_integral`; a true verdict
/// is only ever *cited* together with a verified witness (see
/// [`gk_witness`]).
#[derive(Clone, Debug)]
pub struct GkReport {
    /// (0,0) is a vertex and (0,1) lies in the interior of the opposite edge.
    pub setup_ok: bool,
    /// Width of the triangle (equals twice its area under the setup).
    pub w: Rat,
    /// Edge slopes sorted ascending.
    pub slopes: [Rat; 3],
    /// Number of integers in [s1, s2] (= lattice points in the second
    /// column of any integral dilation).
    pub n: Int,
    /// Number of integers in (n-1)*[s2, s3].
    pub right_count: Int,
    /// Whether n*s2 is an integer (degenerate case; excluded by the
    /// criterion).
    pub ns2_integral: bool,
    pub criterion_holds: bool,
}

impl GkReport {
    /// Name of the first failing condition, if any.
    pub fn first_failure(&self) -> Option<&'static str> {
        if !self.setup_ok {
            Some("setup: (0,0) vertex with (0,1) interior to the opposite edge")
        } else if self.w >= Rat::one() {
            Some("width must be < 1")
        } else if self.right_count != self.n {
            Some("integer count in (n-1)*[s2,s3] must equal n")
        } else if self.ns2_integral {
            Some("n*s2 must not be an integer")
        } else {
            None
        }
    }
}

/// Evaluate the slope criterion on a triangle. Vertical edges propagate as
/// errors; every other failure is reported in the fields.
pub fn gk_criterion(t: &Triangle) -> Result<GkReport> {
    let data = triangle_data(t)?;
    let [s1, s2, s3] = &data.slopes;
    let n = count_integers(s1, s2);
    let scale = Rat::from(&n - 1);
    let (e1, e2) = (&scale * s2, &scale * s3);
    let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
    let right_count = count_integers(&lo, &hi);
    let ns2 = Rat::from(n.clone()) * s2;
    let ns2_integral = ns2.is_integer();
    let setup_ok = gk_setup_check(t);
    let w = data.width.clone();
    let criterion_holds = setup_ok && w < Rat::one() && right_count == n && !ns2_integral;
    Ok(GkReport {
        setup_ok,
        w,
        slopes: data.slopes,
        n,
        right_count,
        ns2_integral,
        criterion_holds,
    })
}

fn validate_gk_params(n: &Int, alpha: &Int, beta: &Int) -> Result<usize> {
    if !n.is_positive() {
        return Err(Error::domain(format!("n = {n} must be >= 1")));
    }
    if !alpha.is_positive() {
        return Err(Error::domain(format!("alpha = {alpha} must be >= 1")));
    }
    if beta.is_negative() {
        return Err(Error::domain(format!("beta = {beta} must be >= 0")));
    }
    n.to_usize()
        .filter(|&v| v < 1 << 20)
        .ok_or_else(|| Error::domain(format!("n = {n} is too large")))
}

/// The (n+1)x(n+1) matrix M: rows P_0..P_{n-1} then L, columns G_0..G_n,
/// with entries
///   M[P_i][G_j] = binom(-alpha, j)   * binom(beta+i,   n-j)
///   M[L][G_j]   = binom(-1-alpha, j) * binom(beta+n+1, n-j).
pub fn build_gk_matrix(n: &Int, alpha: &Int, beta: &Int) -> Result<IntMatrix> {
    let nu = validate_gk_params(n, alpha, beta)?;
    let neg_alpha = -alpha.clone();
    let mut rows = Vec::with_capacity(nu + 1);
    for i in 0..nu {
        let upper = beta + Int::from(i);
        let mut row = Vec::with_capacity(nu + 1);
        for j in 0..=nu {
            row.push(binom_u(&neg_alpha, j as u64) * binom_u(&upper, (nu - j) as u64));
        }
        rows.push(row);
    }
    let l_left = &neg_alpha - 1;
    let l_upper = beta + n + 1;
    let mut row = Vec::with_capacity(nu + 1);
    for j in 0..=nu {
        row.push(binom_u(&l_left, j as u64) * binom_u(&l_upper, (nu - j) as u64));
    }
    rows.push(row);
    IntMatrix::from_rows(rows)
}

/// First n rows of M (the P-point rows); always of full rank n.
pub fn build_gk_matrix_prime(n: &Int, alpha: &Int, beta: &Int) -> Result<IntMatrix> {
    let m = build_gk_matrix(n, alpha, beta)?;
    let nu = m.rows() - 1;
    IntMatrix::from_rows((0..nu).map(|i| m.row(i).to_vec()).collect())
}

/// Arithmetic form of the determinant law: the curve through the P and Q
/// points passes through L iff n*beta = (n+1)*alpha iff det M = 0.
pub fn gk_det_predicate(n: &Int, alpha: &Int, beta: &Int) -> bool {
    n * beta == (n + 1) * alpha
}

/// Slope form of the same law for a normalized middle slope in (-2,-1):
/// det M = 0 iff -s2 = 1 + 1/n. Stated in the source material alongside
/// "n*s2 not integral" without a claimed equivalence; they are kept as
/// independent predicates.
pub fn gk_det_zero_slope_form(n: &Int, s2_normalized: &Rat) -> bool {
    -s2_normalized.clone() == Rat::one() + Rat::new(Int::one(), n.clone())
}

/// G_i(x, y) = binom(x - alpha, i) * binom(y, n - i), the basis the curve
/// coefficients refer to. All G_i vanish on the Q points.
pub fn g_basis_value(n: usize, alpha: &Int, i: usize, x: &Int, y: &Int) -> Int {
    binom_u(&(x - alpha), i as u64) * binom_u(y, (n - i) as u64)
}

/// Coefficients c_0..c_n (first nonzero = 1) of the unique degree <= n curve
/// sum_i c_i G_i through the P points (0, beta+i) and the Q points
/// (alpha+i, 0..n-1-i): the one-dimensional kernel of M'. A kernel of any
/// other dimension violates the uniqueness lemma and errors out.
pub fn gk_interpolation_curve(n: &Int, alpha: &Int, beta: &Int) -> Result<Vec<Rat>> {
    let mp = build_gk_matrix_prime(n, alpha, beta)?;
    let kernel = right_kernel(&mp);
    if kernel.len() != 1 {
        return Err(Error::invariant(format!(
            "kernel of M' must be one-dimensional, got {} (n={n}, alpha={alpha}, beta={beta})",
            kernel.len()
        )));
    }
    let k = &kernel[0];
    let lead = k
        .iter()
        .find(|v| !v.is_zero())
        .ok_or_else(|| Error::invariant("kernel vector is zero"))?
        .clone();
    Ok(k.iter()
        .map(|v| Rat::new(v.clone(), lead.clone()))
        .collect())
}

/// Replay of the proof's row reduction on M': for t = 1..n-1, subtract from
/// each row i = n-1 down to t the row above it. The result has the closed
/// form binom(-alpha, j) * binom(beta, n-i-j) above the antidiagonal and 0
/// below it.
pub fn replay_row_reduction(mp: &IntMatrix) -> IntMatrix {
    let mut rows: Vec<Vec<Int>> = (0..mp.rows()).map(|i| mp.row(i).to_vec()).collect();
    let n = mp.rows();
    for t in 1..n {
        for i in (t..n).rev() {
            let prev = rows[i - 1].clone();
            for (e, p) in rows[i].iter_mut().zip(prev) {
                *e -= p;
            }
        }
    }
    IntMatrix::from_rows(rows).expect("same shape as input")
}

/// Closed form the replay must reach.
pub fn reduced_matrix_closed_form(n: &Int, alpha: &Int, beta: &Int) -> Result<IntMatrix> {
    let nu = validate_gk_params(n, alpha, beta)?;
    let neg_alpha = -alpha.clone();
    let rows = (0..nu)
        .map(|i| {
            (0..=nu)
                .map(|j| {
                    if i + j <= nu {
                        binom_u(&neg_alpha, j as u64) * binom_u(beta, (nu - i - j) as u64)
                    } else {
                        Int::zero()
                    }
                })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(rows)
}

/// The witness polynomial in normalized coordinates:
/// f(x,y) = (sum_i c_i G_i(x,y)) * prod_{k=1}^{alpha-1} (x - k),
/// of total degree (alpha-1) + n = d*width - 1.
#[derive(Clone, Debug)]
pub struct WitnessCurve {
    /// Coefficients over the G-basis, first nonzero = 1.
    pub curve_coeffs: Vec<Rat>,
    /// Vertical lines x = k for k in this inclusive range (empty when
    /// alpha = 1).
    pub vertical_lines: (Int, Int),
    pub total_degree: Int,
}

/// Outcome of building and exhaustively checking a witness at one dilation.
#[derive(Clone, Debug)]
pub struct GkWitnessReport {
    pub curve: WitnessCurve,
    pub normalization: GkNormalization,
    /// d * width, so total_degree = dw - 1.
    pub dw: Int,
    /// Number of normalized support points evaluated (all of them).
    pub points_checked: usize,
    /// f at the excluded leftmost point (-1, beta+n+1); always nonzero.
    pub leftmost_value: Rat,
}

fn eval_witness(coeffs: &[Rat], n: usize, alpha: &Int, p: &LatticePoint) -> Rat {
    let mut g_sum = Rat::zero();
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            g_sum += c * Rat::from(g_basis_value(n, alpha, i, &p.x, &p.y));
        }
    }
    if g_sum.is_zero() {
        return g_sum;
    }
    let mut vertical = Int::one();
    let mut k = Int::one();
    while &k < alpha {
        vertical *= &p.x - &k;
        k += 1;
    }
    g_sum * Rat::from(vertical)
}

/// Build the witness for d*t and verify it by exact evaluation at every
/// normalized support point: it must vanish everywhere except at the
/// leftmost point. Preconditions (criterion, integrality of d*t) fail by
/// name; an evaluation failure is an internal invariant violation, never a
/// mathematical outcome.
pub fn gk_witness(t: &Triangle, d: &Int) -> Result<GkWitnessReport> {
    let report = gk_criterion(t)?;
    if !report.criterion_holds {
        let why = report.first_failure().unwrap_or("criterion");
        return Err(Error::domain(format!(
            "criterion precondition failed: {why}"
        )));
    }
    let norm = gk_normalize(t, d)?;
    debug_assert_eq!(norm.n, report.n);
    let coeffs = gk_interpolation_curve(&norm.n, &norm.alpha, &norm.beta)?;
    let support = normalized_support(t, &norm)?;
    let nu = norm
        .n
        .to_usize()
        .ok_or_else(|| Error::invariant("n does not fit usize"))?;

    let leftmost = support
        .leftmost()
        .ok_or_else(|| Error::invariant("empty normalized support"))?
        .clone();
    let mut leftmost_value = Rat::zero();
    for p in support.points() {
        let v = eval_witness(&coeffs, nu, &norm.alpha, p);
        if *p == leftmost {
            leftmost_value = v;
        } else if !v.is_zero() {
            return Err(Error::invariant(format!(
                "witness fails to vanish at {p} (value {v})"
            )));
        }
    }
    if leftmost_value.is_zero() {
        return Err(Error::invariant(format!(
            "witness vanishes at the leftmost point {leftmost}"
        )));
    }

    let dw = &norm.alpha + &norm.n;
    let curve = WitnessCurve {
        curve_coeffs: coeffs,
        vertical_lines: (Int::one(), &norm.alpha - 1),
        total_degree: &dw - 1,
    };
    Ok(GkWitnessReport {
        curve,
        normalization: norm,
        dw,
        points_checked: support.len(),
        leftmost_value,
    })
}

/// The dilations d (multiples of the minimal integral dilation) for which
/// the normalization is defined, i.e. alpha = d*width - n >= 1; first
/// `count` of them in increasing order.
pub fn admissible_dilations(t: &Triangle, count: usize) -> Result<Vec<Int>> {
    let data = triangle_data(t)?;
    let n = count_integers(&data.slopes[0], &data.slopes[1]);
    let d0 = t.minimal_integral_dilation();
    let mut out = Vec::with_capacity(count);
    let mut k = Int::one();
    while out.len() < count {
        let d = &d0 * &k;
        let dw = &data.width * Rat::from(d.clone());
        debug_assert!(dw.is_integer());
        if dw.to_integer() - &n >= Int::one() {
            out.push(d);
        }
        k += 1;
    }
    Ok(out)
}

/// Deterministic exhaustive search for a criterion-true triangle: scan
/// integral triangles conv{(u1,u2), (0,0), (v1,v2)} with u1 in [-12,-1],
/// v1 in [1,12], u2 in [1,28], v2 in [-28,28] whose edge from (u1,u2) to
/// (v1,v2) crosses the y-axis at an integer height d > v1 - u1, and test
/// the criterion on the triangle scaled by 1/d. Candidates are tried in
/// (d, u1, u2, v1, v2) order and the first success is returned.
pub fn search_criterion_triangle() -> Result<Triangle> {
    let mut candidates = Vec::new();
    for u1 in -12i64..=-1 {
        for v1 in 1i64..=12 {
            let width = v1 - u1;
            for u2 in 1i64..=28 {
                for v2 in -28i64..=28 {
                    // (0, d) on the edge: d = (u2*v1 - u1*v2) / (v1 - u1)
                    let num = u2 * v1 - u1 * v2;
                    if num <= 0 || num % width != 0 {
                        continue;
                    }
                    let d = num / width;
                    if d > width {
                        candidates.push((d, u1, u2, v1, v2));
                    }
                }
            }
        }
    }
    candidates.sort_unstable();
    for (d, u1, u2, v1, v2) in candidates {
        let dr = Rat::from(Int::from(d));
        let t = Triangle::new([
            (
                Rat::from(Int::from(u1)) / &dr,
                Rat::from(Int::from(u2)) / &dr,
            ),
            (Rat::zero(), Rat::zero()),
            (
                Rat::from(Int::from(v1)) / &dr,
                Rat::from(Int::from(v2)) / &dr,
            ),
        ])?;
        let report = gk_criterion(&t)?;
        if report.criterion_holds {
            return Ok(t);
        }
    }
    Err(Error::invariant(
        "search bounds contain no criterion-true triangle",
    ))
}

/// Normalized middle slope of a triangle: s2 shifted by the shear into
/// (-2,-1). Helper for relating the slope form of the determinant law to
/// the arithmetic form.
pub fn normalized_middle_slope(t: &Triangle) -> Result<Rat> {
    let data = triangle_data(t)?;
    let s2 = &data.slopes[1];
    if s2.is_integer() {
        return Err(Error::domain(format!("middle slope {s2} is an integer")));
    }
    let a = Int::from(-2) - rat_floor(s2);
    Ok(s2 + Rat::from(a))
}
