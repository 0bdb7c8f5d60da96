use proptest::prelude::*;
use reflectomap::algebra::{rational, rf_equal_exact, rf_equal_randomized, Fp, ProjPoint, RatFn, Rational, Symbol};
use reflectomap::expr::{parse_expression, BinOp, Expr};
use reflectomap::folding::table2_rows;
use reflectomap::transfer::{apply_transfer, build_transfer, LatticeState};
use reflectomap::ybmaps::engine::apply_chain;
use reflectomap::ybmaps::{builtin_family, FamilyId, NumericDomain, ReflectionMap, Site};

const VARS: [Symbol; 3] = [Symbol::X, Symbol::Y, Symbol::A];

fn poly() -> impl Strategy<Value = RatFn> {
    prop::collection::vec((-5i64..=5, 0u32..3, 0u32..3, 0u32..3), 1..4).prop_map(|terms| {
        terms.into_iter().fold(RatFn::zero(), |acc, (c, i, j, k)| {
            let m = RatFn::var(VARS[0]).pow(i).mul(&RatFn::var(VARS[1]).pow(j)).mul(&RatFn::var(VARS[2]).pow(k));
            acc.add(&RatFn::from_i64(c).mul(&m))
        })
    })
}

fn nonzero_poly() -> impl Strategy<Value = RatFn> {
    poly().prop_map(|p| if p.is_zero() { RatFn::one() } else { p })
}

fn ratfn() -> impl Strategy<Value = RatFn> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| n.div(&d).unwrap())
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0u32..20).prop_map(|n| Expr::Number(n.into())),
        prop::sample::select(vec!["X", "Y", "a", "b", "mu"]).prop_map(|s| Expr::Symbol(s.into())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Group(Box::new(e))),
            (inner.clone(), 0u32..3).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
            (
                prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div]),
                inner.clone(),
                inner
            )
                .prop_map(|(op, l, r)| Expr::Binary(op, Box::new(l), Box::new(r))),
        ]
    })
}

fn fp() -> impl Strategy<Value = Fp> {
    (2u64..1_000_000_007).prop_map(Fp::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(p in ratfn(), q in ratfn(), r in ratfn()) {
        prop_assert!(p.add(&q).equals(&q.add(&p)));
        prop_assert!(p.mul(&q).equals(&q.mul(&p)));
        prop_assert!(p.add(&q).add(&r).equals(&p.add(&q.add(&r))));
        prop_assert!(p.mul(&q).mul(&r).equals(&p.mul(&q.mul(&r))));
        prop_assert!(p.add(&q).mul(&r).equals(&p.mul(&r).add(&q.mul(&r))));
        prop_assert!(p.sub(&p).is_zero());
        if !q.is_zero() {
            prop_assert!(p.div(&q).unwrap().mul(&q).equals(&p));
        }
    }

    #[test]
    fn exact_and_randomized_equality_agree(p in poly(), q in nonzero_poly(), r in nonzero_poly(), seed in any::<u64>()) {
        let lhs = p.mul(&r).div(&q.mul(&r)).unwrap();
        let rhs = p.div(&q).unwrap();
        prop_assert!(rf_equal_exact(&lhs, &rhs));
        prop_assert!(rf_equal_randomized(&lhs, &rhs, 10, seed).unwrap().equal);
        let shifted = rhs.add(&RatFn::one());
        prop_assert!(!rf_equal_exact(&lhs, &shifted));
        prop_assert!(!rf_equal_randomized(&lhs, &shifted, 10, seed).unwrap().equal);
    }

    #[test]
    fn printed_expressions_reparse(e in expr()) {
        let Ok(v) = e.lower_with(&[]) else { return Ok(()) };
        let text = e.to_string();
        let back = parse_expression(&text).unwrap().lower_with(&[]).unwrap();
        prop_assert!(back.equals(&v), "{text}");
    }

    #[test]
    fn components_are_projectively_homogeneous(
        fam in prop::sample::select(FamilyId::BUILTIN.to_vec()),
        x in -20i64..20, y in -20i64..20, a in 2i64..9, b in 2i64..9,
        kx in 1i64..7, ky in -7i64..-1,
    ) {
        let m = builtin_family(fam).unwrap();
        let q = |n: i64| -> Rational { rational(n, 1) };
        let at = |sx: i64, sy: i64| vec![
            (Symbol::X, ProjPoint::finite(q(x)).scaled(&q(sx))),
            (Symbol::Y, ProjPoint::finite(q(y)).scaled(&q(sy))),
            (Symbol::A, ProjPoint::finite(q(a))),
            (Symbol::B, ProjPoint::finite(q(b))),
        ];
        for c in [&m.f, &m.g] {
            let (Ok(u), Ok(v)) = (c.eval_projective(&at(1, 1)), c.eval_projective(&at(kx, ky))) else {
                continue;
            };
            prop_assert_eq!(u, v);
        }
    }

    #[test]
    fn yang_baxter_holds_pointwise(
        fam in prop::sample::select(FamilyId::BUILTIN.to_vec()),
        pts in prop::collection::vec((fp(), fp()), 3),
    ) {
        let m = builtin_family(fam).unwrap();
        let d = NumericDomain::<Fp>::new(&m, None, None).unwrap();
        let sites: Vec<_> = pts.iter().map(|(x, p)| Site { x: ProjPoint::finite(*x), param: *p }).collect();
        use reflectomap::ybmaps::Factor::R;
        let l = apply_chain(&d, &sites, &[R(1, 2), R(0, 2), R(0, 1)]);
        let r = apply_chain(&d, &sites, &[R(0, 1), R(0, 2), R(1, 2)]);
        if let (Ok(l), Ok(r)) = (l, r) {
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn transfer_maps_commute_pointwise(
        fam in prop::sample::select(vec![FamilyId::F3, FamilyId::F4]),
        pts in prop::collection::vec((fp(), fp()), 3),
        j in 1usize..=3, l in 1usize..=3,
    ) {
        let m = builtin_family(fam).unwrap();
        let k: ReflectionMap = table2_rows(fam)[0]
            .reflection_map()
            .unwrap()
            .specialize(&[(Symbol::MU, RatFn::from_i64(2))])
            .unwrap();
        let tj = build_transfer(j, 3, &m, &k, &k).unwrap();
        let tl = build_transfer(l, 3, &m, &k, &k).unwrap();
        let s = LatticeState::finite(pts).unwrap();
        let jl = apply_transfer(&tl, &s).and_then(|t| apply_transfer(&tj, &t));
        let lj = apply_transfer(&tj, &s).and_then(|t| apply_transfer(&tl, &t));
        if let (Ok(jl), Ok(lj)) = (jl, lj) {
            prop_assert_eq!(&jl, &lj);
            for (u, v) in jl.sites.iter().zip(&s.sites) {
                prop_assert_eq!(u.param, v.param);
            }
        }
    }
}
