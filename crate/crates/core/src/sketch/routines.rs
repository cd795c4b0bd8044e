use std::f64::consts::PI;

use super::Stream;
use crate::model::numeric::{circumcenter, direction};
use crate::model::{Constant, ConstantSlot, Pt};

/// Numeric routines a definition may name in its `sketch` line.
pub const ROUTINES: &[&str] = &[
    "free",
    "segment",
    "triangle",
    "r_triangle",
    "iso_triangle",
    "midpoint",
    "foot",
    "circumcenter",
    "reflect",
    "orthocenter",
    "incenter",
    "excenter",
    "line",
    "tline",
    "pline",
    "circle",
    "bline",
    "diameter",
    "bisector",
    "aline0",
    "eqratio",
    "apollonius",
    "rconst",
    "apollonius_const",
    "aconst",
    "radius",
    "cc_tangent",
];

#[derive(Debug, Clone)]
pub enum Arg {
    Pt(Pt),
    Const(String),
}

/// What one construction pins down: a locus or fixed points.
#[derive(Debug, Clone, PartialEq)]
pub enum Object {
    /// Through `p` with direction `d` (not normalized).
    Line { p: Pt, d: Pt },
    Circle { c: Pt, r: f64 },
    Points(Vec<Pt>),
}

fn perp(v: Pt) -> Pt {
    Pt::new(-v.y, v.x)
}

fn unit(v: Pt) -> Pt {
    v.scale(1.0 / v.norm())
}

fn rotate(v: Pt, t: f64) -> Pt {
    let (s, c) = t.sin_cos();
    Pt::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

fn from_angle(t: f64) -> Pt {
    Pt::new(t.cos(), t.sin())
}

fn foot(p: Pt, a: Pt, d: Pt) -> Pt {
    a.add(d.scale(p.sub(a).dot(d) / d.dot(d)))
}

impl Object {
    /// A random point of the locus.
    pub fn sample(&self, s: &mut Stream) -> Pt {
        match self {
            Object::Line { p, d } => p.add(unit(*d).scale(s.uniform(-1.0, 1.0))),
            Object::Circle { c, r } => c.add(from_angle(s.uniform(0.0, 2.0 * PI)).scale(*r)),
            Object::Points(ps) => ps[0],
        }
    }

    /// Intersection candidates in a fixed order.
    pub fn intersect(&self, other: &Object) -> Vec<Pt> {
        use Object::*;
        match (self, other) {
            (Line { p: p1, d: d1 }, Line { p: p2, d: d2 }) => {
                let den = d1.cross(*d2);
                if den.abs() < 1e-12 * d1.norm() * d2.norm() {
                    return vec![];
                }
                let t = p2.sub(*p1).cross(*d2) / den;
                vec![p1.add(d1.scale(t))]
            }
            (Line { p, d }, Circle { c, r }) | (Circle { c, r }, Line { p, d }) => {
                let f = foot(*c, *p, *d);
                let h2 = r * r - f.dist(*c).powi(2);
                if h2 < -1e-12 * r * r {
                    return vec![];
                }
                let h = h2.max(0.0).sqrt();
                let u = unit(*d);
                vec![f.add(u.scale(h)), f.sub(u.scale(h))]
            }
            (Circle { c: c1, r: r1 }, Circle { c: c2, r: r2 }) => {
                let dv = c2.sub(*c1);
                let dist = dv.norm();
                if dist < 1e-12 {
                    return vec![];
                }
                let a = (r1 * r1 - r2 * r2 + dist * dist) / (2.0 * dist);
                let h2 = r1 * r1 - a * a;
                if h2 < -1e-12 * r1 * r1 {
                    return vec![];
                }
                let h = h2.max(0.0).sqrt();
                let u = dv.scale(1.0 / dist);
                let m = c1.add(u.scale(a));
                vec![m.add(perp(u).scale(h)), m.sub(perp(u).scale(h))]
            }
            (Points(ps), _) | (_, Points(ps)) => ps.clone(),
        }
    }
}

fn constant(args: &[Arg], i: usize, slot: ConstantSlot) -> Result<f64, String> {
    match args.get(i) {
        Some(Arg::Const(t)) => Constant::parse(slot, t).map(|c| c.as_f64()).map_err(|e| e.to_string()),
        _ => Err(format!("argument {i} should be a constant")),
    }
}

fn line(p: Pt, d: Pt) -> Result<Object, String> {
    if !(d.norm() > 1e-12) {
        return Err("line direction vanishes".into());
    }
    Ok(Object::Line { p, d })
}

fn circle(c: Pt, r: f64) -> Result<Object, String> {
    if !(r > 1e-12) || !r.is_finite() {
        return Err("circle radius vanishes".into());
    }
    Ok(Object::Circle { c, r })
}

fn apollonius(a: Pt, c: Pt, k: f64) -> Result<Object, String> {
    if (k - 1.0).abs() < 1e-9 {
        return line(a.add(c).scale(0.5), perp(c.sub(a)));
    }
    let k2 = k * k;
    let center = a.sub(c.scale(k2)).scale(1.0 / (1.0 - k2));
    circle(center, k * a.dist(c) / (1.0 - k2).abs())
}

/// Evaluates a routine on its inputs.
pub fn realize(name: &str, args: &[Arg], s: &mut Stream) -> Result<Object, String> {
    let mut pts = Vec::with_capacity(args.len());
    for a in args {
        if let Arg::Pt(p) = a {
            pts.push(*p);
        }
    }
    let p = |i: usize| pts[i];
    let need = |n: usize| -> Result<(), String> {
        if pts.len() < n {
            Err(format!("{name} needs {n} points"))
        } else {
            Ok(())
        }
    };
    match name {
        "free" => Ok(Object::Points(vec![s.point()])),
        "segment" => Ok(Object::Points(vec![s.point(), s.point()])),
        "triangle" => Ok(Object::Points(vec![s.point(), s.point(), s.point()])),
        "r_triangle" => {
            let a = s.point();
            let b = s.point();
            let t = s.uniform(-1.0, 1.0);
            Ok(Object::Points(vec![a, b, a.add(perp(b.sub(a)).scale(t))]))
        }
        "iso_triangle" => {
            let a = s.point();
            let b = s.point();
            let t = s.uniform(0.2, PI - 0.2) * if s.uniform(0.0, 1.0) < 0.5 { 1.0 } else { -1.0 };
            Ok(Object::Points(vec![a, b, a.add(rotate(b.sub(a), t))]))
        }
        "midpoint" => {
            need(2)?;
            Ok(Object::Points(vec![p(0).add(p(1)).scale(0.5)]))
        }
        "foot" => {
            need(3)?;
            Ok(Object::Points(vec![foot(p(0), p(1), p(2).sub(p(1)))]))
        }
        "circumcenter" => {
            need(3)?;
            let o = circumcenter(p(0), p(1), p(2)).ok_or("collinear points have no circumcenter")?;
            Ok(Object::Points(vec![o]))
        }
        "reflect" => {
            need(3)?;
            let f = foot(p(0), p(1), p(2).sub(p(1)));
            Ok(Object::Points(vec![f.scale(2.0).sub(p(0))]))
        }
        "orthocenter" => {
            need(3)?;
            let (a, b, c) = (p(0), p(1), p(2));
            let l1 = Object::Line { p: a, d: perp(c.sub(b)) };
            let l2 = Object::Line { p: b, d: perp(a.sub(c)) };
            let x = l1.intersect(&l2);
            x.first().copied().map(|h| Object::Points(vec![h])).ok_or_else(|| "degenerate triangle".into())
        }
        "incenter" | "excenter" => {
            need(3)?;
            let (a, b, c) = (p(0), p(1), p(2));
            let (la, lb, lc) = (b.dist(c), c.dist(a), a.dist(b));
            let sa = if name == "incenter" { la } else { -la };
            let w = sa + lb + lc;
            if w.abs() < 1e-12 {
                return Err("degenerate triangle".into());
            }
            Ok(Object::Points(vec![a.scale(sa).add(b.scale(lb)).add(c.scale(lc)).scale(1.0 / w)]))
        }
        "line" => {
            need(2)?;
            line(p(0), p(1).sub(p(0)))
        }
        "tline" => {
            need(3)?;
            line(p(0), perp(p(2).sub(p(1))))
        }
        "pline" => {
            need(3)?;
            line(p(0), p(2).sub(p(1)))
        }
        "circle" => {
            need(3)?;
            circle(p(0), p(1).dist(p(2)))
        }
        "bline" => {
            need(2)?;
            line(p(0).add(p(1)).scale(0.5), perp(p(1).sub(p(0))))
        }
        "diameter" => {
            need(2)?;
            circle(p(0).add(p(1)).scale(0.5), p(0).dist(p(1)) / 2.0)
        }
        "bisector" => {
            need(3)?;
            let (a, b, c) = (p(0), p(1), p(2));
            line(b, unit(a.sub(b)).add(unit(c.sub(b))))
        }
        "aline0" => {
            need(7)?;
            let t = direction(p(4), p(5)) + direction(p(2), p(3)) - direction(p(0), p(1));
            line(p(6), from_angle(t))
        }
        "eqratio" => {
            need(7)?;
            let ab = p(0).dist(p(1));
            circle(p(6), p(4).dist(p(5)) * p(2).dist(p(3)) / ab)
        }
        "apollonius" => {
            need(6)?;
            let k = p(2).dist(p(3)) / p(4).dist(p(5));
            apollonius(p(0), p(1), k)
        }
        "apollonius_const" => {
            need(2)?;
            apollonius(p(0), p(1), constant(args, 2, ConstantSlot::Ratio)?)
        }
        "rconst" => {
            need(3)?;
            let r = constant(args, 3, ConstantSlot::Ratio)?;
            circle(p(2), p(0).dist(p(1)) / r)
        }
        "aconst" => {
            need(3)?;
            let r = constant(args, 3, ConstantSlot::Angle)?;
            line(p(2), from_angle(direction(p(0), p(1)) + r))
        }
        "radius" => {
            need(1)?;
            circle(p(0), constant(args, 1, ConstantSlot::Length)?)
        }
        "cc_tangent" => {
            need(4)?;
            let (c1, c2) = (p(0), p(2));
            let (r1, r2) = (c1.dist(p(1)), c2.dist(p(3)));
            let dv = c2.sub(c1);
            let d = dv.norm();
            let cos = (r1 - r2) / d;
            if !(cos.abs() < 1.0 - 1e-9) {
                return Err("circles have no external tangent".into());
            }
            let u = dv.scale(1.0 / d);
            let th = cos.acos();
            let n1 = rotate(u, th);
            let n2 = rotate(u, -th);
            Ok(Object::Points(vec![
                c1.add(n1.scale(r1)),
                c2.add(n1.scale(r2)),
                c1.add(n2.scale(r1)),
                c2.add(n2.scale(r2)),
            ]))
        }
        other => Err(format!("unknown routine `{other}`")),
    }
}
