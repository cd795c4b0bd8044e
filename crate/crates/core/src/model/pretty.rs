use num_traits::One;

use super::constant::{fmt_q, Constant, Q};
use super::predicate::PredicateKind;
use super::statement::Statement;
use super::PointId;

/// Display form of a point name: `a1` becomes `A_1`, `pa` becomes `PA`.
pub fn display_name(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len() + 2);
    let mut prev_digit = false;
    for ch in raw.chars() {
        if ch.is_ascii_digit() {
            if !prev_digit {
                out.push('_');
            }
            out.push(ch);
            prev_digit = true;
        } else {
            out.extend(ch.to_uppercase());
            prev_digit = false;
        }
    }
    out
}

/// Human-readable rendering in the style of the proof listings.
pub fn pretty<'a>(stmt: &Statement, name: impl Fn(PointId) -> &'a str) -> String {
    use PredicateKind::*;
    let n = |p: PointId| display_name(name(p));
    let seg = |a: PointId, b: PointId| format!("{}{}", n(a), n(b));
    let list = |ps: &[PointId]| ps.iter().map(|&p| n(p)).collect::<Vec<_>>().join(",");
    let a = &stmt.args;
    let angle = |p: &[PointId]| -> String {
        let (l1, l2) = ((p[0], p[1]), (p[2], p[3]));
        let shared = [l1.0, l1.1].into_iter().find(|x| *x == l2.0 || *x == l2.1);
        match shared {
            Some(v) => {
                let o1 = if l1.0 == v { l1.1 } else { l1.0 };
                let o2 = if l2.0 == v { l2.1 } else { l2.0 };
                format!("∠{}{}{}", n(o1), n(v), n(o2))
            }
            None => format!("∠({}-{})", seg(l1.0, l1.1), seg(l2.0, l2.1)),
        }
    };
    let tri = |p: &[PointId]| format!("{}{}{}", n(p[0]), n(p[1]), n(p[2]));
    match stmt.kind {
        Coll => format!("{} are collinear", list(a)),
        Ncoll => format!("{} are not collinear", list(a)),
        Cyclic => format!("{} are concyclic", list(a)),
        Para => format!("{} ∥ {}", seg(a[0], a[1]), seg(a[2], a[3])),
        Npara => format!("{} ∦ {}", seg(a[0], a[1]), seg(a[2], a[3])),
        Perp => format!("{} ⟂ {}", seg(a[0], a[1]), seg(a[2], a[3])),
        Cong => format!("{} = {}", seg(a[0], a[1]), seg(a[2], a[3])),
        Midp => format!("{} is midpoint of {}", n(a[0]), seg(a[1], a[2])),
        Circle => format!("{} is the circumcenter of △{}", n(a[0]), tri(&a[1..4])),
        Eqangle => format!("{} = {}", angle(&a[0..4]), angle(&a[4..8])),
        Eqratio => format!(
            "{}:{} = {}:{}",
            seg(a[0], a[1]),
            seg(a[2], a[3]),
            seg(a[4], a[5]),
            seg(a[6], a[7])
        ),
        Eqratio3 => format!(
            "{}:{} = {}:{}",
            seg(a[4], a[0]),
            seg(a[4], a[2]),
            seg(a[5], a[1]),
            seg(a[5], a[3])
        ),
        Sameside => format!(
            "{} is to the same side of {} as {} is to {}",
            n(a[0]),
            seg(a[1], a[2]),
            n(a[3]),
            seg(a[4], a[5])
        ),
        Nsameside => format!(
            "{} is not to the same side of {} as {} is to {}",
            n(a[0]),
            seg(a[1], a[2]),
            n(a[3]),
            seg(a[4], a[5])
        ),
        Sameclock => format!("△{} and △{} have the same orientation", tri(&a[0..3]), tri(&a[3..6])),
        Simtri => format!("△{} is similar to △{}", tri(&a[0..3]), tri(&a[3..6])),
        Simtrir => format!("△{} is reverse-similar to △{}", tri(&a[0..3]), tri(&a[3..6])),
        Contri => format!("△{} is congruent to △{}", tri(&a[0..3]), tri(&a[3..6])),
        Contrir => format!("△{} is reverse-congruent to △{}", tri(&a[0..3]), tri(&a[3..6])),
        Aconst => match stmt.constant {
            Some(Constant::Angle(q)) => format!("{} = {}", angle(&a[0..4]), angle_value(q)),
            _ => unreachable!("aconst carries an angle"),
        },
        Rconst => match stmt.constant {
            Some(Constant::Ratio(q)) => format!("{}:{} = {}", seg(a[0], a[1]), seg(a[2], a[3]), fmt_q(q)),
            _ => unreachable!("rconst carries a ratio"),
        },
        Lconst => match stmt.constant {
            Some(Constant::Length(q)) => format!("{} = {}", seg(a[0], a[1]), fmt_q(q)),
            _ => unreachable!("lconst carries a length"),
        },
        Acompute => format!("{} = ?", angle(&a[0..4])),
        Rcompute => format!("{}:{} = ?", seg(a[0], a[1]), seg(a[2], a[3])),
        Lcompute => format!("{} = ?", seg(a[0], a[1])),
        PythagoreanPremises => format!("△{} is right at {}", tri(&a[0..3]), n(a[0])),
        PythagoreanConclusions => format!(
            "{}² = {}² + {}²",
            seg(a[1], a[2]),
            seg(a[0], a[1]),
            seg(a[0], a[2])
        ),
    }
}

fn angle_value(q: Q) -> String {
    let deg = q * Q::from_integer(180);
    if deg.is_integer() {
        format!("{}°", deg.numer())
    } else if q.numer().is_one() {
        format!("π/{}", q.denom())
    } else {
        format!("{}π/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::constant::Constant;

    fn names() -> Vec<&'static str> {
        vec!["a", "b", "c", "d", "e", "h", "o1", "b2", "b1"]
    }

    fn render(kind: PredicateKind, args: &[u16], c: Option<Constant>) -> String {
        let names = names();
        let args: Vec<PointId> = args.iter().map(|&i| PointId(i)).collect();
        let s = Statement::new(kind, &args, c).unwrap();
        pretty(&s, |p| names[p.index()])
    }

    #[test]
    fn perp_rendering() {
        assert_eq!(render(PredicateKind::Perp, &[0, 5, 1, 2], None), "AH ⟂ BC");
    }

    #[test]
    fn coll_rendering() {
        assert_eq!(render(PredicateKind::Coll, &[1, 2, 3], None), "B,C,D are collinear");
    }

    #[test]
    fn midp_rendering() {
        assert_eq!(render(PredicateKind::Midp, &[4, 0, 2], None), "E is midpoint of AC");
    }

    #[test]
    fn circle_rendering() {
        assert_eq!(render(PredicateKind::Circle, &[4, 0, 1, 2], None), "E is the circumcenter of △ABC");
    }

    #[test]
    fn names_with_digits() {
        assert_eq!(display_name("o1"), "O_1");
        assert_eq!(display_name("a12"), "A_12");
        assert_eq!(display_name("pa"), "PA");
    }

    #[test]
    fn vertex_angle() {
        // angle at B2 between B2O1 and B2B1, angle at H between HO1 and HB1
        let r = render(PredicateKind::Eqangle, &[7, 6, 7, 8, 5, 6, 5, 8], None);
        assert!(r.starts_with('∠') && r.contains(" = ∠"), "{r}");
    }

    #[test]
    fn constants() {
        use crate::model::constant::Q;
        assert_eq!(
            render(PredicateKind::Lconst, &[0, 1], Some(Constant::Length(Q::from_integer(5)))),
            "AB = 5"
        );
        assert_eq!(
            render(PredicateKind::Aconst, &[0, 1, 0, 2], Some(Constant::Angle(Q::new(5, 18)))),
            "∠BAC = 50°"
        );
    }
}
