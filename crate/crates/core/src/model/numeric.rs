use std::f64::consts::PI;

use super::constant::Constant;
use super::predicate::PredicateKind;
use super::statement::Statement;
use super::PointId;

/// Absolute tolerance on coordinates kept near unit scale.
pub const ATOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Pt {
    pub x: f64,
    pub y: f64,
}

impl Pt {
    pub const fn new(x: f64, y: f64) -> Pt {
        Pt { x, y }
    }
    pub fn sub(self, o: Pt) -> Pt {
        Pt::new(self.x - o.x, self.y - o.y)
    }
    pub fn add(self, o: Pt) -> Pt {
        Pt::new(self.x + o.x, self.y + o.y)
    }
    pub fn scale(self, k: f64) -> Pt {
        Pt::new(self.x * k, self.y * k)
    }
    pub fn dot(self, o: Pt) -> f64 {
        self.x * o.x + self.y * o.y
    }
    pub fn cross(self, o: Pt) -> f64 {
        self.x * o.y - self.y * o.x
    }
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
    pub fn dist(self, o: Pt) -> f64 {
        self.sub(o).norm()
    }
    pub fn close(self, o: Pt) -> bool {
        self.dist(o) < ATOL
    }
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericError {
    #[error("point {0:?} has no coordinates")]
    MissingPoint(PointId),
    #[error("degenerate configuration")]
    Degenerate,
}

/// Read access to coordinates by point id.
pub trait Coords {
    fn get(&self, p: PointId) -> Option<Pt>;
}

impl Coords for [Pt] {
    fn get(&self, p: PointId) -> Option<Pt> {
        <[Pt]>::get(self, p.index()).copied()
    }
}

impl Coords for Vec<Pt> {
    fn get(&self, p: PointId) -> Option<Pt> {
        self.as_slice().get(p.index()).copied()
    }
}

/// `|v| < ATOL * (1 + scale)`.
pub fn near_zero(v: f64, scale: f64) -> bool {
    v.abs() < ATOL * (1.0 + scale.abs())
}

/// Direction of the line through `a` and `b` in `[0, π)`.
pub fn direction(a: Pt, b: Pt) -> f64 {
    let d = b.sub(a);
    let t = d.y.atan2(d.x);
    let r = t.rem_euclid(PI);
    if r >= PI - 1e-15 {
        0.0
    } else {
        r
    }
}

/// Signed distance of two angles taken mod π, folded into `(-π/2, π/2]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let mut d = (a - b).rem_euclid(PI);
    if d > PI / 2.0 {
        d -= PI;
    }
    d
}

pub fn collinear(a: Pt, b: Pt, c: Pt) -> bool {
    let u = b.sub(a);
    let v = c.sub(a);
    near_zero(u.cross(v), u.norm() * v.norm())
}

pub fn circumcenter(a: Pt, b: Pt, c: Pt) -> Option<Pt> {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    if d.abs() < 1e-12 {
        return None;
    }
    let a2 = a.dot(a);
    let b2 = b.dot(b);
    let c2 = c.dot(c);
    let x = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
    let y = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    Some(Pt::new(x, y))
}

fn signed_area(a: Pt, b: Pt, c: Pt) -> f64 {
    b.sub(a).cross(c.sub(a))
}

struct View<'a, C: Coords + ?Sized> {
    coords: &'a C,
}

impl<'a, C: Coords + ?Sized> View<'a, C> {
    fn pt(&self, p: PointId) -> Result<Pt, NumericError> {
        self.coords.get(p).ok_or(NumericError::MissingPoint(p))
    }

    fn seg(&self, a: PointId, b: PointId) -> Result<(Pt, Pt), NumericError> {
        let pa = self.pt(a)?;
        let pb = self.pt(b)?;
        if pa.close(pb) {
            return Err(NumericError::Degenerate);
        }
        Ok((pa, pb))
    }

    fn dir(&self, a: PointId, b: PointId) -> Result<f64, NumericError> {
        let (pa, pb) = self.seg(a, b)?;
        Ok(direction(pa, pb))
    }

    fn len(&self, a: PointId, b: PointId) -> Result<f64, NumericError> {
        let (pa, pb) = self.seg(a, b)?;
        Ok(pa.dist(pb))
    }

    fn angle(&self, a: PointId, b: PointId, c: PointId, d: PointId) -> Result<f64, NumericError> {
        Ok((self.dir(c, d)? - self.dir(a, b)?).rem_euclid(PI))
    }
}

fn same_angle(x: f64, y: f64) -> bool {
    angle_diff(x, y).abs() < ATOL
}

fn same_ratio(p: f64, q: f64) -> bool {
    near_zero(p - q, p.abs().max(q.abs()))
}

/// Numerical truth of a statement on the diagram.
///
/// Compute predicates only require their objects to be non-degenerate.
pub fn check_numerical<C: Coords + ?Sized>(stmt: &Statement, coords: &C) -> Result<bool, NumericError> {
    use PredicateKind::*;
    let v = View { coords };
    let a = &stmt.args;
    match stmt.kind {
        Coll | Ncoll => {
            let pts = a.iter().map(|&p| v.pt(p)).collect::<Result<Vec<_>, _>>()?;
            let (i, j) = farthest_pair(&pts);
            if pts[i].close(pts[j]) {
                return Err(NumericError::Degenerate);
            }
            let all = pts.iter().all(|&p| collinear(pts[i], pts[j], p));
            Ok(all == (stmt.kind == Coll))
        }
        Para | Npara => {
            let d = angle_diff(v.dir(a[0], a[1])?, v.dir(a[2], a[3])?);
            Ok((d.abs() < ATOL) == (stmt.kind == Para))
        }
        Perp => {
            let d = angle_diff(v.dir(a[0], a[1])?, v.dir(a[2], a[3])? + PI / 2.0);
            Ok(d.abs() < ATOL)
        }
        Cong => Ok(same_ratio(v.len(a[0], a[1])?, v.len(a[2], a[3])?)),
        Cyclic => {
            let pts = a.iter().map(|&p| v.pt(p)).collect::<Result<Vec<_>, _>>()?;
            for (i, p) in pts.iter().enumerate() {
                if pts[..i].iter().any(|q| q.close(*p)) {
                    return Err(NumericError::Degenerate);
                }
            }
            let Some(o) = circumcenter(pts[0], pts[1], pts[2]) else {
                return Ok(false);
            };
            let r = o.dist(pts[0]);
            Ok(pts[3..].iter().all(|p| near_zero(o.dist(*p) - r, r)))
        }
        Circle => {
            let r = v.len(a[0], a[1])?;
            Ok(same_ratio(v.len(a[0], a[2])?, r) && same_ratio(v.len(a[0], a[3])?, r))
        }
        Midp => {
            let (pa, pb) = v.seg(a[1], a[2])?;
            let m = v.pt(a[0])?;
            Ok(m.close(pa.add(pb).scale(0.5)))
        }
        Eqangle => Ok(same_angle(
            v.angle(a[0], a[1], a[2], a[3])?,
            v.angle(a[4], a[5], a[6], a[7])?,
        )),
        Eqratio => {
            let l = v.len(a[0], a[1])? * v.len(a[6], a[7])?;
            let r = v.len(a[2], a[3])? * v.len(a[4], a[5])?;
            Ok(same_ratio(l, r))
        }
        Eqratio3 => {
            // args: a b c d m n  with  MA/MC = NB/ND  and  MA/AC = NB/BD
            let (pa, pb, pc, pd, m, n) = (a[0], a[1], a[2], a[3], a[4], a[5]);
            let ok1 = same_ratio(v.len(m, pa)? * v.len(n, pd)?, v.len(m, pc)? * v.len(n, pb)?);
            let ok2 = same_ratio(v.len(m, pa)? * v.len(pb, pd)?, v.len(pa, pc)? * v.len(n, pb)?);
            Ok(ok1 && ok2)
        }
        Sameside | Nsameside => {
            let p0 = v.pt(a[0])?;
            let p3 = v.pt(a[3])?;
            let s1 = p0.sub(v.pt(a[1])?).dot(p0.sub(v.pt(a[2])?));
            let s2 = p3.sub(v.pt(a[4])?).dot(p3.sub(v.pt(a[5])?));
            if s1.abs() < ATOL * ATOL || s2.abs() < ATOL * ATOL {
                return Err(NumericError::Degenerate);
            }
            Ok((s1 * s2 > 0.0) == (stmt.kind == Sameside))
        }
        Sameclock => {
            let (s1, s2) = orientations(&v, a)?;
            Ok(s1 == s2)
        }
        Simtri | Simtrir | Contri | Contrir => {
            let (s1, s2) = orientations(&v, a)?;
            let direct = matches!(stmt.kind, Simtri | Contri);
            if (s1 == s2) != direct {
                return Ok(false);
            }
            let l1 = [v.len(a[0], a[1])?, v.len(a[1], a[2])?, v.len(a[2], a[0])?];
            let l2 = [v.len(a[3], a[4])?, v.len(a[4], a[5])?, v.len(a[5], a[3])?];
            let k = l2[0] / l1[0];
            let sim = (1..3).all(|i| same_ratio(l1[i] * k, l2[i]));
            let cong = !matches!(stmt.kind, Contri | Contrir) || same_ratio(k, 1.0);
            Ok(sim && cong)
        }
        Aconst => {
            let target = stmt.constant.map(|c| c.as_f64()).ok_or(NumericError::Degenerate)?;
            Ok(same_angle(v.angle(a[0], a[1], a[2], a[3])?, target))
        }
        Rconst => {
            let target = stmt.constant.map(|c| c.as_f64()).ok_or(NumericError::Degenerate)?;
            Ok(same_ratio(v.len(a[0], a[1])? / v.len(a[2], a[3])?, target))
        }
        Lconst => {
            let target = stmt.constant.map(|c| c.as_f64()).ok_or(NumericError::Degenerate)?;
            Ok(same_ratio(v.len(a[0], a[1])?, target))
        }
        Acompute | Rcompute => {
            v.seg(a[0], a[1])?;
            v.seg(a[2], a[3])?;
            Ok(true)
        }
        Lcompute => {
            v.seg(a[0], a[1])?;
            Ok(true)
        }
        PythagoreanPremises => {
            let d = angle_diff(v.dir(a[0], a[1])?, v.dir(a[0], a[2])? + PI / 2.0);
            Ok(d.abs() < ATOL)
        }
        PythagoreanConclusions => {
            let ab = v.len(a[0], a[1])?;
            let ac = v.len(a[0], a[2])?;
            let bc = v.len(a[1], a[2])?;
            Ok(same_ratio(ab * ab + ac * ac, bc * bc))
        }
    }
}

fn orientations<C: Coords + ?Sized>(v: &View<'_, C>, a: &[PointId]) -> Result<(bool, bool), NumericError> {
    let t1 = signed_area(v.pt(a[0])?, v.pt(a[1])?, v.pt(a[2])?);
    let t2 = signed_area(v.pt(a[3])?, v.pt(a[4])?, v.pt(a[5])?);
    if t1.abs() < ATOL * ATOL || t2.abs() < ATOL * ATOL {
        return Err(NumericError::Degenerate);
    }
    Ok((t1 > 0.0, t2 > 0.0))
}

fn farthest_pair(pts: &[Pt]) -> (usize, usize) {
    let mut best = (0, 1, -1.0);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let d = pts[i].dist(pts[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    (best.0, best.1)
}

/// Angle in units of π of the direction from line `ab` to line `cd`, for tests and tools.
pub fn angle_between(a: Pt, b: Pt, c: Pt, d: Pt) -> f64 {
    (direction(c, d) - direction(a, b)).rem_euclid(PI) / PI
}

/// Check a constant statement against a free-standing value.
pub fn constant_matches(c: Constant, measured: f64) -> bool {
    match c {
        Constant::Angle(_) => same_angle(measured, c.as_f64()),
        _ => same_ratio(measured, c.as_f64()),
    }
}
