//! I-function constructors for flag bundles, their abelian towers and the
//! μ-twisted families.

pub mod constructors;
pub mod factors;
pub mod setup;

pub use constructors::{brown_i, f_ab, grassmann_i, gt_modify, main_flag_i, specialize_novikov, twisted_f};
pub use setup::{oh_split_input, FlagSetup, Twist};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Poly, Var};
    use crate::rings::builders::{gkm_ring, grassmann};
    use crate::rings::{BaseDesc, GkmVariant};
    use crate::series::{
        compare_series, fixed_point_restrict_series, materialize_table, ClassValues, MultiDeg, Truncation,
    };

    fn trunc(d: u32) -> Truncation {
        Truncation {
            dmax: d,
            zlo: -12,
            zhi: 2,
            minv: 6,
        }
    }

    #[test]
    fn projective_line_degree_one() {
        let s = FlagSetup::trivial(2, &[1], false, trunc(1)).unwrap();
        let ring = grassmann(1, 2, &BaseDesc::Point).unwrap();
        let c = materialize_table(&grassmann_i(&s).unwrap(), &ring, s.trunc).unwrap();
        let ClassValues::Laurent(v) = c.get(&MultiDeg::new(vec![], vec![1])).unwrap() else {
            panic!()
        };
        // 1/(H+z)^2 = z^-2 − 2H z^-3
        assert_eq!(v[0].coeff(-2), Some(&Poly::one()));
        assert_eq!(v[1].coeff(-3), Some(&Poly::int(-2)));
        assert_eq!(v[0].terms().count() + v[1].terms().count(), 2);
    }

    #[test]
    fn weyl_factor_forms_agree_on_gr24() {
        let s = FlagSetup::trivial(4, &[2], false, trunc(2)).unwrap();
        let ring = grassmann(2, 4, &BaseDesc::Point).unwrap();
        let a = materialize_table(&main_flag_i(&s).unwrap(), &ring, s.trunc).unwrap();
        let b = materialize_table(&grassmann_i(&s).unwrap(), &ring, s.trunc).unwrap();
        let rep = compare_series(&a, &b, "flag vs grassmann");
        assert!(rep.conclusive(), "{rep}");
    }

    #[test]
    fn tower_modification_matches_flag_at_fixed_points() {
        let s = FlagSetup::trivial(3, &[1, 2], true, trunc(1)).unwrap();
        let ring = gkm_ring(&[1, 2], 3, GkmVariant::Flag).unwrap();
        let a = fixed_point_restrict_series(&gt_modify(&brown_i(&s).unwrap()).unwrap(), &ring, 1).unwrap();
        let b = fixed_point_restrict_series(&main_flag_i(&s).unwrap(), &ring, 1).unwrap();
        let rep = compare_series(&a, &b, "gt(brown) vs flag");
        assert!(rep.conclusive(), "{rep}");
        // degree zero is the unit
        let one = a.closed_at(&MultiDeg::new(vec![], vec![0, 0]), 0).unwrap();
        assert!(one.is_one());
        let _ = Var::Z;
    }
}
