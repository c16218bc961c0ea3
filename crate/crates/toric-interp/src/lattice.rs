//! Lattice-side model: integer points, rational triangles, affine unimodular
//! maps, support sets, and the normalization that puts a dilated triangle of
//! middle slope s2 into the position used by the slope-criterion machinery.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{count_integers, rat_ceil, rat_floor, Int, Rat};

/// A point of Z^2. Ordering is lexicographic (x, then y).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LatticePoint {
    pub x: Int,
    pub y: Int,
}

impl LatticePoint {
    pub fn new(x: impl Into<Int>, y: impl Into<Int>) -> Self {
        LatticePoint {
            x: x.into(),
            y: y.into(),
        }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub type RatPoint = (Rat, Rat);

fn cross(u: &RatPoint, v: &RatPoint) -> Rat {
    &u.0 * &v.1 - &u.1 * &v.0
}

fn sub(p: &RatPoint, q: &RatPoint) -> RatPoint {
    (&p.0 - &q.0, &p.1 - &q.1)
}

/// A non-degenerate triangle with rational vertices, stored sorted
/// lexicographically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Triangle {
    vertices: [RatPoint; 3],
}

impl Triangle {
    pub fn new(mut vertices: [RatPoint; 3]) -> Result<Self> {
        vertices.sort();
        let ab = sub(&vertices[1], &vertices[0]);
        let ac = sub(&vertices[2], &vertices[0]);
        if cross(&ab, &ac).is_zero() {
            return Err(Error::DegenerateTriangle(format!(
                "vertices {}, {}, {} are collinear",
                fmt_rat_point(&vertices[0]),
                fmt_rat_point(&vertices[1]),
                fmt_rat_point(&vertices[2]),
            )));
        }
        Ok(Triangle { vertices })
    }

    pub fn from_integers(coords: [(i64, i64); 3]) -> Result<Self> {
        Triangle::new(coords.map(|(x, y)| (Rat::from(Int::from(x)), Rat::from(Int::from(y)))))
    }

    pub fn vertices(&self) -> &[RatPoint; 3] {
        &self.vertices
    }

    /// The triangle scaled by a positive rational factor about the origin.
    pub fn scaled(&self, q: &Rat) -> Result<Triangle> {
        if !q.is_positive() {
            return Err(Error::domain(format!("scale factor {q} must be positive")));
        }
        Triangle::new([
            (q * &self.vertices[0].0, q * &self.vertices[0].1),
            (q * &self.vertices[1].0, q * &self.vertices[1].1),
            (q * &self.vertices[2].0, q * &self.vertices[2].1),
        ])
    }

    /// True when every vertex of q*t is integral.
    pub fn dilation_is_integral(&self, q: &Int) -> bool {
        let q = Rat::from(q.clone());
        self.vertices
            .iter()
            .all(|(x, y)| (x * &q).is_integer() && (y * &q).is_integer())
    }

    /// Least positive integer d with d*t integral (lcm of the vertex
    /// coordinate denominators).
    pub fn minimal_integral_dilation(&self) -> Int {
        let mut l = Int::one();
        for (x, y) in &self.vertices {
            l = num_integer::lcm(l, x.denom().clone());
            l = num_integer::lcm(l, y.denom().clone());
        }
        l
    }
}

fn fmt_rat_point(p: &RatPoint) -> String {
    format!("({},{})", p.0, p.1)
}

/// Slopes (sorted ascending), width, and doubled area of a triangle with no
/// vertical edges.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TriangleData {
    pub slopes: [Rat; 3],
    pub width: Rat,
    pub doubled_area: Rat,
}

fn edge_slope(p: &RatPoint, q: &RatPoint) -> Result<Rat> {
    let dx = &q.0 - &p.0;
    if dx.is_zero() {
        return Err(Error::VerticalEdge);
    }
    Ok((&q.1 - &p.1) / dx)
}

/// Slopes/width/doubled-area of `t`; errors on vertical edges.
pub fn triangle_data(t: &Triangle) -> Result<TriangleData> {
    let v = t.vertices();
    let mut slopes = [
        edge_slope(&v[0], &v[1])?,
        edge_slope(&v[0], &v[2])?,
        edge_slope(&v[1], &v[2])?,
    ];
    slopes.sort();
    let width = &v[2].0 - &v[0].0;
    let ab = sub(&v[1], &v[0]);
    let ac = sub(&v[2], &v[0]);
    let doubled_area = cross(&ab, &ac).abs();
    Ok(TriangleData {
        slopes,
        width,
        doubled_area,
    })
}

/// A finite set of lattice points, sorted lexicographically with no
/// duplicates. The leftmost (= lex-minimal) point always sits at index 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SupportSet {
    points: Vec<LatticePoint>,
}

impl SupportSet {
    pub fn new(mut points: Vec<LatticePoint>) -> Result<Self> {
        points.sort();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::validation("support set contains duplicate points"));
        }
        Ok(SupportSet { points })
    }

    pub fn points(&self) -> &[LatticePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the lexicographically minimal point.
    pub fn leftmost_index(&self) -> usize {
        0
    }

    pub fn leftmost(&self) -> Option<&LatticePoint> {
        self.points.first()
    }

    pub fn index_of(&self, p: &LatticePoint) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    /// Points grouped by column, keyed by x, each column sorted by y.
    pub fn columns(&self) -> BTreeMap<Int, Vec<Int>> {
        let mut cols: BTreeMap<Int, Vec<Int>> = BTreeMap::new();
        for p in &self.points {
            cols.entry(p.x.clone()).or_default().push(p.y.clone());
        }
        cols
    }
}

/// Lattice points of q*t, sorted lexicographically.
pub fn enumerate_points(t: &Triangle, q: &Int) -> Result<SupportSet> {
    if !q.is_positive() {
        return Err(Error::domain(format!("dilation factor {q} must be >= 1")));
    }
    let qr = Rat::from(q.clone());
    let v: Vec<RatPoint> = t
        .vertices()
        .iter()
        .map(|(x, y)| (x * &qr, y * &qr))
        .collect();

    // Each edge, oriented so the opposite vertex is on the non-negative side.
    // Constraint per edge: sign * ((bx-ax)(y-ay) - (by-ay)(x-ax)) >= 0.
    struct EdgeConstraint {
        a: RatPoint,
        dx: Rat,
        dy: Rat,
        sign: Rat,
    }
    let mut edges = Vec::with_capacity(3);
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let dx = &v[j].0 - &v[i].0;
        let dy = &v[j].1 - &v[i].1;
        let val = &dx * (&v[k].1 - &v[i].1) - &dy * (&v[k].0 - &v[i].0);
        let sign = if val.is_positive() {
            Rat::one()
        } else {
            -Rat::one()
        };
        edges.push(EdgeConstraint {
            a: v[i].clone(),
            dx,
            dy,
            sign,
        });
    }

    let min_x = v.iter().map(|p| p.0.clone()).min().expect("three vertices");
    let max_x = v.iter().map(|p| p.0.clone()).max().expect("three vertices");
    let mut points = Vec::new();
    let mut x = rat_ceil(&min_x);
    let x_hi = rat_floor(&max_x);
    while x <= x_hi {
        let xr = Rat::from(x.clone());
        // Intersect the three half-plane constraints with the column x.
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        let mut feasible = true;
        for e in &edges {
            // sign * (dx*(y - ay) - dy*(x - ax)) >= 0
            let rhs = &e.dy * (&xr - &e.a.0); // dx*(y - ay) must be >= rhs (after sign)
            let coeff = &e.sign * &e.dx;
            let bound = &e.sign * rhs;
            if coeff.is_zero() {
                if bound.is_positive() {
                    feasible = false;
                    break;
                }
                continue;
            }
            let b = &bound / &coeff + &e.a.1;
            if coeff.is_positive() {
                lo = Some(match lo {
                    Some(l) if l >= b => l,
                    _ => b,
                });
            } else {
                hi = Some(match hi {
                    Some(h) if h <= b => h,
                    _ => b,
                });
            }
        }
        if feasible {
            if let (Some(lo), Some(hi)) = (lo, hi) {
                let mut y = rat_ceil(&lo);
                let y_hi = rat_floor(&hi);
                while y <= y_hi {
                    points.push(LatticePoint {
                        x: x.clone(),
                        y: y.clone(),
                    });
                    y += 1;
                }
            }
        }
        x += 1;
    }
    SupportSet::new(points)
}

/// Exponent pairs (u,v) with u,v >= 0, a*u + b*v <= d and c | (d - a*u - b*v):
/// the support of degree-d monomials on P(a,b,c) in the chart that eliminates
/// the third variable. Weights must be >= 1 and pairwise coprime.
pub fn support_from_wpp(a: &Int, b: &Int, c: &Int, d: &Int) -> Result<SupportSet> {
    validate_weights(a, b, c)?;
    if d.is_negative() {
        return Err(Error::domain(format!("degree {d} must be >= 0")));
    }
    // v runs over the residue class  v = b^{-1} (d - a*u)  mod c.
    let gcd = b.extended_gcd(c);
    debug_assert!(gcd.gcd.is_one());
    let binv = gcd.x.mod_floor(c);
    let mut points = Vec::new();
    let mut u = Int::zero();
    while &u * a <= *d {
        let rem = d - a * &u;
        let v0 = (&binv * &rem).mod_floor(c);
        let mut v = v0;
        while &v * b <= rem {
            points.push(LatticePoint {
                x: u.clone(),
                y: v.clone(),
            });
            v += c;
        }
        u += 1;
    }
    SupportSet::new(points)
}

pub fn validate_weights(a: &Int, b: &Int, c: &Int) -> Result<()> {
    for (name, v) in [("a", a), ("b", b), ("c", c)] {
        if !v.is_positive() {
            return Err(Error::domain(format!("weight {name} = {v} must be >= 1")));
        }
    }
    for ((na, x), (nb, y)) in [
        (("a", a), ("b", b)),
        (("a", a), ("c", c)),
        (("b", b), ("c", c)),
    ] {
        if !num_integer::gcd(x.clone(), y.clone()).is_one() {
            return Err(Error::domain(format!(
                "weights {na} = {x} and {nb} = {y} are not coprime"
            )));
        }
    }
    Ok(())
}

/// An affine map p -> M p + t with M in GL2(Z) (|det M| = 1) and integral t.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineUnimodularMap {
    pub m: [[Int; 2]; 2],
    pub t: [Int; 2],
}

impl AffineUnimodularMap {
    pub fn new(m: [[Int; 2]; 2], t: [Int; 2]) -> Result<Self> {
        let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if !det.abs().is_one() {
            return Err(Error::validation(format!(
                "matrix determinant {det} is not +-1"
            )));
        }
        Ok(AffineUnimodularMap { m, t })
    }

    pub fn identity() -> Self {
        AffineUnimodularMap {
            m: [[Int::one(), Int::zero()], [Int::zero(), Int::one()]],
            t: [Int::zero(), Int::zero()],
        }
    }

    /// The shear (x, y) -> (x, y + a*x).
    pub fn shear(a: impl Into<Int>) -> Self {
        AffineUnimodularMap {
            m: [[Int::one(), Int::zero()], [a.into(), Int::one()]],
            t: [Int::zero(), Int::zero()],
        }
    }

    pub fn translation(tx: impl Into<Int>, ty: impl Into<Int>) -> Self {
        AffineUnimodularMap {
            m: [[Int::one(), Int::zero()], [Int::zero(), Int::one()]],
            t: [tx.into(), ty.into()],
        }
    }

    pub fn apply_point(&self, p: &LatticePoint) -> LatticePoint {
        LatticePoint {
            x: &self.m[0][0] * &p.x + &self.m[0][1] * &p.y + &self.t[0],
            y: &self.m[1][0] * &p.x + &self.m[1][1] * &p.y + &self.t[1],
        }
    }

    pub fn apply_rat_point(&self, p: &RatPoint) -> RatPoint {
        let (x, y) = p;
        (
            Rat::from(self.m[0][0].clone()) * x
                + Rat::from(self.m[0][1].clone()) * y
                + Rat::from(self.t[0].clone()),
            Rat::from(self.m[1][0].clone()) * x
                + Rat::from(self.m[1][1].clone()) * y
                + Rat::from(self.t[1].clone()),
        )
    }

    /// self âˆ˜ other (apply `other` first).
    pub fn compose(&self, other: &AffineUnimodularMap) -> AffineUnimodularMap {
        let mm =
            |i: usize, j: usize| &self.m[i][0] * &other.m[0][j] + &self.m[i][1] * &other.m[1][j];
        let tv = |i: usize| &self.m[i][0] * &other.t[0] + &self.m[i][1] * &other.t[1] + &self.t[i];
        AffineUnimodularMap {
            m: [[mm(0, 0), mm(0, 1)], [mm(1, 0), mm(1, 1)]],
            t: [tv(0), tv(1)],
        }
    }

    pub fn inverse(&self) -> AffineUnimodularMap {
        let det = &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0];
        // det is +-1, so the adjugate divided by det stays integral.
        let inv = [
            [&self.m[1][1] / &det, -(&self.m[0][1] / &det)],
            [-(&self.m[1][0] / &det), &self.m[0][0] / &det],
        ];
        let tx = -(&inv[0][0] * &self.t[0] + &inv[0][1] * &self.t[1]);
        let ty = -(&inv[1][0] * &self.t[0] + &inv[1][1] * &self.t[1]);
        AffineUnimodularMap {
            m: inv,
            t: [tx, ty],
        }
    }
}

/// Image of a support set (always re-sorted; unimodular maps are injective so
/// cardinality is preserved).
pub fn apply_map(map: &AffineUnimodularMap, s: &SupportSet) -> SupportSet {
    apply_map_tracked(map, s).0
}

/// Image of a support set plus, for each input index, the index of its image
/// in the (re-sorted) output.
pub fn apply_map_tracked(map: &AffineUnimodularMap, s: &SupportSet) -> (SupportSet, Vec<usize>) {
    let images: Vec<LatticePoint> = s.points().iter().map(|p| map.apply_point(p)).collect();
    let out = SupportSet::new(images.clone()).expect("injective map keeps points distinct");
    let tracking = images
        .iter()
        .map(|p| out.index_of(p).expect("image present"))
        .collect();
    (out, tracking)
}

pub fn apply_map_triangle(map: &AffineUnimodularMap, t: &Triangle) -> Triangle {
    let v = t.vertices();
    Triangle::new([
        map.apply_rat_point(&v[0]),
        map.apply_rat_point(&v[1]),
        map.apply_rat_point(&v[2]),
    ])
    .expect("unimodular image of a triangle stays non-degenerate")
}

/// True iff (0,0) is a vertex of `t` and (0,1) lies in the relative interior
/// of the edge joining the other two vertices.
pub fn gk_setup_check(t: &Triangle) -> bool {
    let zero = (Rat::zero(), Rat::zero());
    let one = (Rat::zero(), Rat::one());
    let v = t.vertices();
    let Some(pos) = v.iter().position(|p| *p == zero) else {
        return false;
    };
    let others: Vec<&RatPoint> = (0..3).filter(|&i| i != pos).map(|i| &v[i]).collect();
    let (p, q) = (others[0], others[1]);
    // collinear with the edge and strictly between its endpoints
    let pq = sub(q, p);
    let pt = sub(&one, p);
    if !cross(&pq, &pt).is_zero() {
        return false;
    }
    if one == *p || one == *q {
        return false;
    }
    if !pq.0.is_zero() {
        (one.0 > p.0.clone().min(q.0.clone())) && (one.0 < p.0.clone().max(q.0.clone()))
    } else {
        (one.1 > p.1.clone().min(q.1.clone())) && (one.1 < p.1.clone().max(q.1.clone()))
    }
}

/// Result of normalizing d*t: the composed shear-and-translate map plus the
/// normalized invariants (n, alpha, beta).
#[derive(Clone, Debug)]
pub struct GkNormalization {
    pub map: AffineUnimodularMap,
    pub n: Int,
    pub alpha: Int,
    pub beta: Int,
    pub d: Int,
}

/// Shear d*t so its middle slope lands in (-2,-1), then translate the
/// leftmost vertex to the column x = -1 and the rightmost vertex onto the
/// x-axis. Requires d*t integral and a non-integral middle slope. The
/// normalized support must have the column profile
///   leftmost = (-1, beta+n+1),
///   column x=0       = {(0,beta), ..., (0,beta+n-1)},
///   column x=alpha+i = {(alpha+i,0), ..., (alpha+i,n-1-i)}  (0 <= i < n),
/// which is verified by enumeration and surfaced as an error when violated.
pub fn gk_normalize(t: &Triangle, d: &Int) -> Result<GkNormalization> {
    if !d.is_positive() {
        return Err(Error::domain(format!("dilation {d} must be >= 1")));
    }
    let data = triangle_data(t)?;
    let s2 = &data.slopes[1];
    if s2.is_integer() {
        return Err(Error::domain(format!(
            "middle slope {s2} is an integer; normalization needs s2 not in Z"
        )));
    }
    if !t.dilation_is_integral(d) {
        return Err(Error::NormalizationIntegrality(format!(
            "{d} * t does not have integer vertices (least valid dilation is {})",
            t.minimal_integral_dilation()
        )));
    }

    let n = count_integers(&data.slopes[0], s2);
    if !n.is_positive() {
        return Err(Error::domain(
            "no integer slopes in [s1, s2]: the second column of the dilated support is empty"
                .to_string(),
        ));
    }

    // unique integer shear with -2 < s2 + a < -1
    let a = Int::from(-2) - rat_floor(s2);
    let shear = AffineUnimodularMap::shear(a.clone());

    let dr = Rat::from(d.clone());
    let scaled: Vec<RatPoint> = t
        .vertices()
        .iter()
        .map(|(x, y)| (x * &dr, y * &dr))
        .collect();
    let sheared: Vec<RatPoint> = scaled.iter().map(|p| shear.apply_rat_point(p)).collect();
    // vertices are sorted lexicographically and x-coordinates are distinct
    let leftmost = &sheared[0];
    let rightmost = &sheared[2];
    let tx = -Rat::one() - &leftmost.0;
    let ty = -rightmost.1.clone();
    debug_assert!(tx.is_integer() && ty.is_integer());
    let translate = AffineUnimodularMap::translation(tx.to_integer(), ty.to_integer());
    let map = translate.compose(&shear);

    let dw = (&data.width * &dr).to_integer();
    let alpha = &dw - &n;
    if !alpha.is_positive() {
        return Err(Error::domain(format!(
            "alpha = d*width - n = {alpha} must be >= 1"
        )));
    }
    let s2n = s2 + Rat::from(a);
    let beta_r = -&s2n * Rat::from(dw.clone()) - Rat::from(&n + 1);
    debug_assert!(beta_r.is_integer());
    let beta = beta_r.to_integer();
    if beta.is_negative() {
        return Err(Error::domain(format!("beta = {beta} must be >= 0")));
    }

    let norm = GkNormalization {
        map,
        n,
        alpha,
        beta,
        d: d.clone(),
    };
    let support = normalized_support(t, &norm)?;
    check_normalized_profile(&support, &norm.n, &norm.alpha, &norm.beta)?;
    Ok(norm)
}

/// Lattice points of map(d*t) for a previously computed normalization.
pub fn normalized_support(t: &Triangle, norm: &GkNormalization) -> Result<SupportSet> {
    let scaled = t.scaled(&Rat::from(norm.d.clone()))?;
    let mapped = apply_map_triangle(&norm.map, &scaled);
    enumerate_points(&mapped, &Int::one())
}

/// Verify the column profile stated in [`gk_normalize`].
pub fn check_normalized_profile(
    support: &SupportSet,
    n: &Int,
    alpha: &Int,
    beta: &Int,
) -> Result<()> {
    let cols = support.columns();
    let fail = |msg: String| Err(Error::NormalizationStructure(msg));

    let leftmost_col = cols
        .get(&Int::from(-1))
        .ok_or_else(|| Error::NormalizationStructure("no column at x = -1".into()))?;
    let l_y = beta + n + 1;
    if leftmost_col.len() != 1 || leftmost_col[0] != l_y {
        return fail(format!("column x=-1 must be exactly {{({},{})}}", -1, l_y));
    }
    match support.leftmost() {
        Some(p) if p.x == Int::from(-1) && p.y == l_y => {}
        _ => return fail(format!("leftmost point must be (-1,{l_y})")),
    }

    let n_u = n
        .to_usize()
        .ok_or_else(|| Error::invariant("n does not fit usize"))?;
    let p_col = cols
        .get(&Int::zero())
        .ok_or_else(|| Error::NormalizationStructure("no column at x = 0".into()))?;
    let expected: Vec<Int> = (0..n_u).map(|i| beta + Int::from(i)).collect();
    if *p_col != expected {
        return fail(format!(
            "column x=0 must be {{({0},{1}), ..., ({0},{2})}}",
            0,
            beta,
            beta + n - 1
        ));
    }

    for i in 0..n_u {
        let x = alpha + Int::from(i);
        let col = cols.get(&x);
        let expected: Vec<Int> = (0..n_u - i).map(Int::from).collect();
        if col != Some(&expected) {
            return fail(format!(
                "column x={} must be {{(x,0), ..., (x,{})}}",
                x,
                n_u - 1 - i
            ));
        }
    }
    Ok(())
}

/// Normalized triangle for synthetic (n, alpha, beta) data with a chosen
/// third vertex: conv{(-1, beta+n+1), v3, (alpha+n-1, 0)}. Test helper for
/// round trips.
#[cfg(test)]
pub(crate) fn synthetic_normalized_triangle(
    n: i64,
    alpha: i64,
    beta: i64,
    v3: (i64, i64),
) -> Triangle {
    Triangle::from_integers([(-1, beta + n + 1), v3, (alpha + n - 1, 0)]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn ri(n: i64) -> Rat {
        Rat::from(Int::from(n))
    }

    fn tri(coords: [(i64, i64); 3]) -> Triangle {
        Triangle::from_integers(coords).unwrap()
    }

    /// The running example triangle with vertices (0,0), (10,40), (36,27).
    fn question_triangle() -> Triangle {
        tri([(0, 0), (10, 40), (36, 27)])
    }

    #[test]
    fn triangle_data_question_example() {
        let d = triangle_data(&question_triangle()).unwrap();
        assert_eq!(d.slopes, [rat(-1, 2), rat(3, 4), rat(4, 1)]);
        assert_eq!(d.width, ri(36));
        assert_eq!(d.doubled_area, ri(1170));
    }

    #[test]
    fn triangle_data_small_example() {
        let d = triangle_data(&tri([(0, 0), (2, 1), (1, 3)])).unwrap();
        assert_eq!(d.slopes, [rat(-2, 1), rat(1, 2), rat(3, 1)]);
        assert_eq!(d.width, ri(2));
        assert_eq!(d.doubled_area, ri(5));
    }

    #[test]
    fn triangle_rejects_degenerate() {
        assert!(Triangle::from_integers([(0, 0), (1, 1), (2, 2)]).is_err());
        assert!(Triangle::from_integers([(0, 0), (0, 0), (1, 2)]).is_err());
    }

    #[test]
    fn triangle_data_rejects_vertical_edge() {
        let t = tri([(0, 0), (0, 3), (2, 1)]);
        assert!(matches!(triangle_data(&t), Err(Error::VerticalEdge)));
    }

    #[test]
    fn enumerate_unit_triangle() {
        let t = tri([(0, 0), (1, 0), (0, 1)]);
        let s1 = enumerate_points(&t, &Int::one()).unwrap();
        assert_eq!(
            s1.points(),
            &[
                LatticePoint::new(0, 0),
                LatticePoint::new(0, 1),
                LatticePoint::new(1, 0)
            ]
        );
        let s2 = enumerate_points(&t, &Int::from(2)).unwrap();
        assert_eq!(s2.len(), 6);
    }

    /// Independent membership test: a point is in the triangle iff it is on
    /// the inner side of all three edges.
    fn brute_force_points(t: &Triangle, q: i64) -> Vec<LatticePoint> {
        let v: Vec<RatPoint> = t
            .vertices()
            .iter()
            .map(|(x, y)| (x * ri(q), y * ri(q)))
            .collect();
        let inside = |px: i64, py: i64| {
            let p = (ri(px), ri(py));
            for (i, j, k) in [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)] {
                let e = cross(&sub(&v[j], &v[i]), &sub(&p, &v[i]));
                let r = cross(&sub(&v[j], &v[i]), &sub(&v[k], &v[i]));
                if (&e * &r).is_negative() {
                    return false;
                }
            }
            true
        };
        let xs: Vec<i64> = v
            .iter()
            .map(|p| rat_floor(&p.0).to_i64().unwrap())
            .collect();
        let ys: Vec<i64> = v
            .iter()
            .map(|p| rat_floor(&p.1).to_i64().unwrap())
            .collect();
        let mut out = Vec::new();
        for x in xs.iter().min().unwrap() - 1..=xs.iter().max().unwrap() + 1 {
            for y in ys.iter().min().unwrap() - 1..=ys.iter().max().unwrap() + 1 {
                if inside(x, y) {
                    out.push(LatticePoint::new(x, y));
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn enumerate_matches_brute_force() {
        let cases = [
            tri([(0, 0), (10, 40), (36, 27)]),
            tri([(0, 0), (2, 1), (1, 3)]),
            tri([(-1, 21), (4, -2), (14, 0)]),
            tri([(0, 0), (0, 3), (2, 1)]), // vertical edge is fine for enumeration
            Triangle::new([
                (rat(-1, 2), rat(1, 3)),
                (rat(5, 2), rat(-1, 2)),
                (rat(1, 1), rat(7, 3)),
            ])
            .unwrap(),
        ];
        for t in &cases {
            for q in 1..=3i64 {
                let got = enumerate_points(t, &Int::from(q)).unwrap();
                assert_eq!(got.points(), brute_force_points(t, q).as_slice(), "q={q}");
            }
        }
    }

    #[test]
    fn enumerate_question_triangle_counts() {
        let t = question_triangle();
        for (q, expected) in [(1i64, 602usize), (2, 2373), (3, 5314)] {
            let s = enumerate_points(&t, &Int::from(q)).unwrap();
            assert_eq!(s.len(), expected, "count at q={q}");
        }
    }

    /// Counts of integral triangles fit A*q^2 + (B/2)*q + 1 where A is the
    /// area and B the boundary lattice count (sum of edge gcds).
    #[test]
    fn enumerate_satisfies_quadratic_count_law() {
        let mut rng = StdRng::seed_from_u64(7);
        let mut seen = 0;
        while seen < 12 {
            let v: [(i64, i64); 3] =
                std::array::from_fn(|_| (rng.gen_range(-6..7), rng.gen_range(-6..7)));
            let Ok(t) = Triangle::from_integers(v) else {
                continue;
            };
            seen += 1;
            let data = {
                let ab = (v[1].0 - v[0].0, v[1].1 - v[0].1);
                let ac = (v[2].0 - v[0].0, v[2].1 - v[0].1);
                (ab.0 * ac.1 - ab.1 * ac.0).abs()
            };
            let boundary: i64 = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(i, j)| (v[i].0 - v[j].0).gcd(&(v[i].1 - v[j].1)))
                .sum();
            for q in 1..=4i64 {
                let count = enumerate_points(&t, &Int::from(q)).unwrap().len() as i64;
                assert_eq!(
                    2 * count,
                    data * q * q + boundary * q + 2,
                    "triangle {v:?} q={q}"
                );
            }
        }
    }

    #[test]
    fn wpp_support_examples() {
        let s = support_from_wpp(
            &Int::from(9),
            &Int::from(10),
            &Int::from(13),
            &Int::from(13),
        )
        .unwrap();
        assert_eq!(s.points(), &[LatticePoint::new(0, 0)]);

        let s =
            support_from_wpp(&Int::from(1), &Int::from(1), &Int::from(1), &Int::from(2)).unwrap();
        assert_eq!(s.len(), 6);

        let s =
            support_from_wpp(&Int::from(1), &Int::from(1), &Int::from(2), &Int::from(1)).unwrap();
        assert_eq!(
            s.points(),
            &[LatticePoint::new(0, 1), LatticePoint::new(1, 0)]
        );
    }

    #[test]
    fn wpp_support_rejects_bad_weights() {
        assert!(
            support_from_wpp(&Int::from(2), &Int::from(4), &Int::from(5), &Int::from(3)).is_err()
        );
        assert!(
            support_from_wpp(&Int::from(0), &Int::from(1), &Int::from(1), &Int::from(3)).is_err()
        );
    }

    /// Brute-force oracle for the weighted support.
    #[test]
    fn wpp_support_matches_brute_force() {
        let mut rng = StdRng::seed_from_u64(11);
        let mut done = 0;
        while done < 30 {
            let a = rng.gen_range(1..8i64);
            let b = rng.gen_range(1..8i64);
            let c = rng.gen_range(1..8i64);
            if a.gcd(&b) != 1 || a.gcd(&c) != 1 || b.gcd(&c) != 1 {
                continue;
            }
            done += 1;
            let d = rng.gen_range(0..40i64);
            let got = support_from_wpp(&Int::from(a), &Int::from(b), &Int::from(c), &Int::from(d))
                .unwrap();
            let mut expected = Vec::new();
            for u in 0..=d {
                for v in 0..=d {
                    let w = d - a * u - b * v;
                    if w >= 0 && w % c == 0 {
                        expected.push(LatticePoint::new(u, v));
                    }
                }
            }
            expected.sort();
            assert_eq!(got.points(), expected.as_slice(), "({a},{b},{c}), d={d}");
        }
    }

    #[test]
    fn wpp_support_grows_with_degree_plus_abc() {
        let mut rng = StdRng::seed_from_u64(13);
        let mut done = 0;
        while done < 20 {
            let a = rng.gen_range(1..10i64);
            let b = rng.gen_range(1..10i64);
            let c = rng.gen_range(1..10i64);
            if a.gcd(&b) != 1 || a.gcd(&c) != 1 || b.gcd(&c) != 1 {
                continue;
            }
            done += 1;
            let d = rng.gen_range(0..60i64);
            let small =
                support_from_wpp(&Int::from(a), &Int::from(b), &Int::from(c), &Int::from(d))
                    .unwrap();
            let big = support_from_wpp(
                &Int::from(a),
                &Int::from(b),
                &Int::from(c),
                &Int::from(d + a * b * c),
            )
            .unwrap();
            assert!(big.len() > small.len());
        }
    }

    #[test]
    fn wpp_and_triangle_cardinalities_agree_for_question_weights() {
        let t = question_triangle();
        for q in 1..=2i64 {
            let s_t = enumerate_points(&t, &Int::from(q)).unwrap();
            let s_w = support_from_wpp(
                &Int::from(9),
                &Int::from(10),
                &Int::from(13),
                &Int::from(1170 * q),
            )
            .unwrap();
            assert_eq!(s_t.len(), s_w.len(), "q={q}");
        }
    }

    #[test]
    fn unimodular_map_validation_and_inverse() {
        assert!(AffineUnimodularMap::new(
            [[Int::from(2), Int::zero()], [Int::zero(), Int::one()]],
            [Int::zero(), Int::zero()],
        )
        .is_err());
        let m = AffineUnimodularMap::new(
            [[Int::from(2), Int::from(1)], [Int::from(3), Int::from(2)]],
            [Int::from(-4), Int::from(9)],
        )
        .unwrap();
        let inv = m.inverse();
        let id = m.compose(&inv);
        assert_eq!(id, AffineUnimodularMap::identity());
        let p = LatticePoint::new(5, -7);
        assert_eq!(inv.apply_point(&m.apply_point(&p)), p);
    }

    #[test]
    fn apply_map_preserves_cardinality_and_tracks_indices() {
        let s = enumerate_points(&question_triangle(), &Int::one()).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..10 {
            let a = rng.gen_range(-3..4i64);
            let map = AffineUnimodularMap::shear(a).compose(&AffineUnimodularMap::translation(
                rng.gen_range(-9..9i64),
                rng.gen_range(-9..9i64),
            ));
            let (image, tracking) = apply_map_tracked(&map, &s);
            assert_eq!(image.len(), s.len());
            // shear-and-translate maps preserve lexicographic order
            assert!(tracking.iter().enumerate().all(|(i, &j)| i == j));
            assert_eq!(
                image.leftmost(),
                Some(&map.apply_point(s.leftmost().unwrap()))
            );
        }
        // a map that flips coordinates still tracks correctly
        let flip = AffineUnimodularMap::new(
            [[Int::zero(), Int::one()], [Int::one(), Int::zero()]],
            [Int::zero(), Int::zero()],
        )
        .unwrap();
        let (image, tracking) = apply_map_tracked(&flip, &s);
        assert_eq!(image.len(), s.len());
        for (i, p) in s.points().iter().enumerate() {
            assert_eq!(image.points()[tracking[i]], flip.apply_point(p));
        }
    }

    #[test]
    fn setup_check_examples() {
        let yes = Triangle::new([
            (ri(0), ri(0)),
            (rat(-1, 4), rat(11, 8)),
            (rat(1, 2), rat(1, 4)),
        ])
        .unwrap();
        assert!(gk_setup_check(&yes));

        // the question triangle scaled to width < 1 has no (0,1) on its top edge
        let t = question_triangle().scaled(&rat(1, 1170)).unwrap();
        assert!(!gk_setup_check(&t));

        // (0,1) as an endpoint of the edge does not count
        let endpoint = tri([(0, 0), (0, 1), (2, 1)]);
        assert!(!gk_setup_check(&endpoint));

        // missing (0,0) vertex
        let off = tri([(1, 0), (-1, 2), (3, 1)]);
        assert!(!gk_setup_check(&off));
    }

    /// Frozen slope-criterion instance: vertices (-5/16, 23/16), (0,0),
    /// (5/8, 1/8); its minimal integral dilation is 16 and normalization
    /// yields (n, alpha, beta) = (3, 12, 17).
    fn frozen_criterion_triangle() -> Triangle {
        Triangle::new([
            (rat(-5, 16), rat(23, 16)),
            (rat(0, 1), rat(0, 1)),
            (rat(5, 8), rat(1, 8)),
        ])
        .unwrap()
    }

    #[test]
    fn normalize_frozen_instance() {
        let t = frozen_criterion_triangle();
        assert_eq!(t.minimal_integral_dilation(), Int::from(16));
        let norm = gk_normalize(&t, &Int::from(16)).unwrap();
        assert_eq!(norm.n, Int::from(3));
        assert_eq!(norm.alpha, Int::from(12));
        assert_eq!(norm.beta, Int::from(17));
        // middle slope -7/5 is already in (-2,-1): pure translation
        assert_eq!(norm.map.m, AffineUnimodularMap::identity().m);
        assert_eq!(norm.map.t, [Int::from(4), Int::from(-2)]);
        assert!(gk_normalize(&t, &Int::from(8)).is_err()); // not integral at 8
        let norm2 = gk_normalize(&t, &Int::from(32)).unwrap();
        assert_eq!(norm2.n, Int::from(3));
        assert_eq!(norm2.alpha, Int::from(27));
        assert_eq!(norm2.beta, Int::from(38));
    }

    #[test]
    fn normalize_round_trips_synthetic_data() {
        // (n, alpha, beta, third vertex) tuples whose triangles satisfy the
        // normalized column profile
        let cases = [
            (2i64, 3i64, 4i64, (1i64, 0i64)),
            (1, 1, 1, (0, 1)),
            (1, 2, 2, (0, 2)),
            (1, 2, 2, (1, 0)),
            (3, 12, 17, (4, -2)),
            (2, 28, 51, (14, -5)),
        ];
        let mut rng = StdRng::seed_from_u64(20260825);
        for (n, alpha, beta, v3) in cases {
            let t0 = synthetic_normalized_triangle(n, alpha, beta, v3);
            let base = gk_normalize(&t0, &Int::one()).unwrap();
            assert_eq!(
                (base.n.clone(), base.alpha.clone(), base.beta.clone()),
                (Int::from(n), Int::from(alpha), Int::from(beta)),
                "direct normalization of synthetic data ({n},{alpha},{beta})"
            );
            for _ in 0..8 {
                let shear = AffineUnimodularMap::shear(rng.gen_range(-4..5i64));
                let translate = AffineUnimodularMap::translation(
                    rng.gen_range(-15..16i64),
                    rng.gen_range(-15..16i64),
                );
                let map = translate.compose(&shear);
                let perturbed = apply_map_triangle(&map, &t0);
                let norm = gk_normalize(&perturbed, &Int::one()).unwrap();
                assert_eq!(
                    (norm.n.clone(), norm.alpha.clone(), norm.beta.clone()),
                    (Int::from(n), Int::from(alpha), Int::from(beta)),
                    "round trip for ({n},{alpha},{beta}) with map {map:?}"
                );
                // the normalization undoes the perturbation over the support
                let s0 = normalized_support(&t0, &base).unwrap();
                let s1 = normalized_support(&perturbed, &norm).unwrap();
                assert_eq!(s0, s1);
            }
        }
    }

    #[test]
    fn normalize_rejects_integral_middle_slope() {
        // synthetic (1,1,2) forces s2 = -2, which is integral
        let t = synthetic_normalized_triangle(1, 1, 2, (0, 1));
        let err = gk_normalize(&t, &Int::one()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)), "{err}");
    }

    #[test]
    fn normalize_rejects_profile_violations() {
        // width 5, slopes fine, but the right columns are too tall
        let t = tri([(-1, 12), (1, 0), (7, 0)]);
        let err = gk_normalize(&t, &Int::one()).unwrap_err();
        assert!(matches!(err, Error::NormalizationStructure(_)), "{err}");
    }
}
