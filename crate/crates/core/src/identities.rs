//! Exact relations among the catalog forms, each as a pair of expansions
//! that must agree.

use crate::forms::{divisor_form_c, divisor_form_d, subst_q2, FormLibrary, FormName};
use crate::ode::{theta_k, OdeFamily, WeightedSeries};
use crate::scalar::Scalar;
use crate::series::Series;

#[derive(Debug, Clone, PartialEq)]
pub struct Identity<T> {
    pub name: &'static str,
    pub lhs: Series<T>,
    pub rhs: Series<T>,
}

/// Every relation, with both sides known below `prec`.
pub fn identity_suite<T: Scalar>(lib: &FormLibrary<T>, prec: i64) -> Vec<Identity<T>> {
    let r = |n: i64, d: i64| T::ratio(n, d);
    let get = |n| lib.get(n, prec);
    let (c, d, g, delta) = (
        get(FormName::C),
        get(FormName::D),
        get(FormName::G),
        get(FormName::DELTA_2A),
    );
    let (e2, e2a, e4, e6) = (
        get(FormName::E2),
        get(FormName::E2A),
        get(FormName::E4),
        get(FormName::E6),
    );
    let half = (prec + 1) / 2;
    let e4_2 = subst_q2(&lib.get(FormName::E4, half)).truncate(prec);
    let e6_2 = subst_q2(&lib.get(FormName::E6, half)).truncate(prec);
    let th = |f: &Series<T>, k: i64| {
        theta_k(
            lib,
            &WeightedSeries {
                series: f.clone(),
                weight: T::from_int(k),
            },
            OdeFamily::TWO_A,
        )
        .series
    };
    let c2 = c.mul(&c);
    let c3 = c2.mul(&c);
    let cd = c.mul(&d);

    let pairs = vec![
        ("theta(C) = -G/4", th(&c, 2), g.scale(&r(-1, 4))),
        ("theta(G) = -C^3/2", th(&g, 4), c3.scale(&r(-1, 2))),
        ("theta(DELTA_2A) = 0", th(&delta, 8), Series::zero(prec)),
        (
            "G^2 - C^4 = -256 DELTA_2A",
            g.mul(&g).sub(&c2.mul(&c2)),
            delta.scale(&r(-256, 1)),
        ),
        (
            "E2A' = (E2A^2 - C^2)/8",
            e2a.theta(),
            e2a.mul(&e2a).sub(&c2).scale(&r(1, 8)),
        ),
        (
            "DELTA_2A = D(C^2 - 64D)",
            delta.clone(),
            d.mul(&c2.sub(&d.scale(&r(64, 1)))),
        ),
        (
            "C' = (E2 C - C^2)/6 + 32D",
            c.theta(),
            e2.mul(&c).sub(&c2).scale(&r(1, 6)).add(&d.scale(&r(32, 1))),
        ),
        (
            "C^2 = (E4 + 4 E4(2tau))/5",
            c2.clone(),
            e4.add(&e4_2.scale(&r(4, 1))).scale(&r(1, 5)),
        ),
        (
            "C^3 - 128CD = (E6 + 8 E6(2tau))/9",
            c3.sub(&cd.scale(&r(128, 1))),
            e6.add(&e6_2.scale(&r(8, 1))).scale(&r(1, 9)),
        ),
        (
            "G = (4 E4(2tau) - E4)/3",
            g.clone(),
            e4_2.scale(&r(4, 1)).sub(&e4).scale(&r(1, 3)),
        ),
        ("C = odd divisor sums", c.clone(), divisor_form_c(prec)),
        ("D = odd divisor sums", d.clone(), divisor_form_d(prec)),
        (
            "E2A DELTA_2A = theta(DELTA_2A)",
            e2a.mul(&delta),
            delta.theta(),
        ),
    ];
    pairs
        .into_iter()
        .map(|(name, lhs, rhs)| Identity { name, lhs, rhs })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn suite_holds_at_low_precision() {
        let lib = FormLibrary::<BigRational>::new();
        let suite = identity_suite(&lib, 40);
        assert_eq!(suite.len(), 13);
        for id in &suite {
            assert!(id.lhs.eq_to(&id.rhs, 40).unwrap().equal, "{}", id.name);
        }
    }

    #[test]
    fn a_wrong_relation_is_caught() {
        let lib = FormLibrary::<BigRational>::new();
        let c = lib.get(FormName::C, 20);
        let g = lib.get(FormName::G, 20);
        let agr = c.theta().eq_to(&g.scale(&BigRational::ratio(-1, 4)), 20).unwrap();
        assert!(!agr.equal);
    }
}
