//! Acceptance suite: one test per acceptance criterion. Every check is an
//! exact comparison (tolerance zero) of two independently expanded sides;
//! each test prints a single PASS line summarizing its scope and timing.

use std::time::Instant;

use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use immanant_kit::coeff::Coefficient;
use immanant_kit::fermion::{
    det_closed_form, det_fermion, linear_series_closed_form, muir_sum, product_linear_series,
    scalar_registry, FermionElem,
};
use immanant_kit::group::{
    act_on_poly, sn_characters, Character, Group, Side, DEFAULT_MAX_GROUP_SIZE,
};
use immanant_kit::identities::{
    cauchy_sides, det_expansion_sides, epsilon_det_boson_sides, epsilon_master_boson_sides,
    frobenius_sides, loewner_multinomial, loewner_sides, product_even_cauchy_sides,
    product_even_dual_sides, product_odd_sides, resolve_character, resolve_group, vectors_upto,
    verify_case, IdentityCase, IdentityName, VerificationReport,
};
use immanant_kit::matrix::PolyMatrix;
use immanant_kit::perm::Perm;
use immanant_kit::poly::{Monomial, Poly};
use immanant_kit::symfunc::{partitions_upto, pow_matrix, schur, staircase, vandermonde, weight};
use immanant_kit::vars::{Sym, VarRegistry};

fn verify(case: IdentityCase) -> VerificationReport {
    let report = verify_case(&case, DEFAULT_MAX_GROUP_SIZE).expect("case must run");
    assert!(
        report.verified(),
        "{} n={} D={} [group={} char={} epsilon={}]: difference begins {:?}",
        report.case.identity,
        report.case.n,
        report.case.degree,
        report.case.group,
        report.case.character,
        report.case.epsilon,
        report.difference.first()
    );
    report
}

fn pass(criterion: u32, detail: &str) {
    println!("criterion {criterion} PASS: {detail}");
}

/// The diagonal product prod_i sum_{M<=d} f_M t^M u_i^M v_i^M, the
/// left-hand side of the projector identities, built with plain
/// commutative multiplication.
fn plain_diag_product(reg: &std::sync::Arc<VarRegistry>, d: u32) -> Poly {
    let mut acc = Poly::one(reg);
    for i in 1..=reg.n() {
        let mut factor = Poly::zero(reg);
        for m in 0..=d {
            factor.add_term(
                Monomial::from_pairs(
                    reg,
                    [
                        (reg.id(Sym::F(m as usize)), 1),
                        (reg.t_id(), m),
                        (reg.id(Sym::U(i)), m),
                        (reg.id(Sym::V(i)), m),
                    ],
                ),
                &Coefficient::one(),
            );
        }
        acc = acc.mul_trunc(&factor, Some(d));
    }
    acc
}

#[test]
fn criterion_01_cauchy_determinant() {
    let start = Instant::now();
    for n in 1..=4 {
        verify(IdentityCase::new(IdentityName::Cauchy, n, 6));
    }
    let ms = start.elapsed().as_millis();
    assert!(ms < 120_000, "n<=4 at D=6 must finish within 120 s, took {ms} ms");
    pass(1, &format!("cauchy determinant n=1..4 at D=6 in {ms} ms"));
}

#[test]
fn criterion_02_frobenius_with_symbolic_c() {
    for n in [2usize, 3] {
        verify(IdentityCase::new(IdentityName::Frobenius, n, 5));
        let (fl, fr) = frobenius_sides(n, 5);
        let (cl, cr) = cauchy_sides(n, 5);
        let reg = fl.registry().clone();
        let zero = Poly::zero(&reg);
        // The c=0 specialization reproduces the plain expansion byte for byte.
        assert_eq!(
            fl.substitute_one(reg.c_id(), &zero).canonical_string(),
            cl.canonical_string(),
            "c=0 left side must serialize identically at n={n}"
        );
        assert_eq!(
            fr.substitute_one(reg.c_id(), &zero).canonical_string(),
            cr.canonical_string(),
            "c=0 right side must serialize identically at n={n}"
        );
        // At c=1 the matrix has rank one and the determinant vanishes.
        let one = Poly::one(&reg);
        assert!(fl.substitute_one(reg.c_id(), &one).is_zero());
    }
    pass(2, "frobenius n=2,3 at D=5 with symbolic c; c=0 byte-matches cauchy");
}

#[test]
fn criterion_03_det_and_perm_expansions() {
    for n in 1..=3 {
        verify(IdentityCase::new(IdentityName::DetExpansion, n, 5));
        // The permanent verifier chains all three forms: matrix permanent,
        // the (1/n!)-weighted permanent pair sum, and the |Stab|-weighted
        // monomial symmetric form.
        verify(IdentityCase::new(IdentityName::PermExpansion, n, 5));
    }
    pass(3, "det/perm expansions (both permanent forms) n=1..3 at D=5");
}

#[test]
fn criterion_04_loewner_lowest_order() {
    assert_eq!(loewner_multinomial(3), BigInt::from(3));
    assert_eq!(loewner_multinomial(4), BigInt::from(60));
    for n in 2..=4 {
        let cn2 = (n * (n - 1) / 2) as u32;
        let (lhs, rhs) = loewner_sides(n);
        // Every Taylor coefficient below C(n,2) vanishes identically...
        for j in 0..cn2 {
            assert!(
                lhs.coeff_of_t(j).is_zero(),
                "t^{j} coefficient must vanish at n={n}"
            );
        }
        // ...and the comparison pins the C(n,2)-th against the closed form
        // with the recomputed multinomial factor.
        assert_eq!(lhs, rhs, "lowest nonvanishing coefficient mismatch at n={n}");
        verify(IdentityCase::new(IdentityName::Loewner, n, 0));
    }
    pass(4, "loewner n=2..4: sub-staircase coefficients vanish, staircase term matches");
}

#[test]
fn criterion_05_master_boson_all_settings() {
    // S3: all three irreducibles.
    for chi in ["[3]", "[2,1]", "[1,1,1]"] {
        verify(
            IdentityCase::new(IdentityName::MasterBoson, 3, 3)
                .with_group("builtin:S3")
                .with_character(chi),
        );
    }
    // S4: sign, trivial, and the two degree-3 irreducibles.
    for chi in ["sign", "trivial", "3,1", "2,1,1"] {
        verify(
            IdentityCase::new(IdentityName::MasterBoson, 4, 3)
                .with_group("builtin:S4")
                .with_character(chi),
        );
    }
    // C3 inside S3: all three linear characters over the third cyclotomics.
    for chi in ["chi0", "chi1", "chi2"] {
        verify(
            IdentityCase::new(IdentityName::MasterBoson, 3, 3)
                .with_group("builtin:C3")
                .with_character(chi),
        );
    }
    // Cross-character annihilation in each setting: projecting onto one
    // isotypic component and then onto a different one gives exactly zero.
    for (spec, n, chars) in [
        ("builtin:S3", 3usize, vec!["[3]", "[2,1]", "[1,1,1]"]),
        ("builtin:S4", 4, vec!["sign", "trivial", "3,1", "2,1,1"]),
        ("builtin:C3", 3, vec!["chi0", "chi1", "chi2"]),
    ] {
        let (group, table) = resolve_group(spec, n, DEFAULT_MAX_GROUP_SIZE).unwrap();
        let chars: Vec<Character> = chars
            .iter()
            .map(|c| resolve_character(&group, &table, c).unwrap())
            .collect();
        let reg = VarRegistry::new(n, 3);
        let p = plain_diag_product(&reg, 3);
        for chi in &chars {
            let projected = group.e_chi_apply(chi, Side::U, &p, false);
            for psi in &chars {
                if chi.name() == psi.name() {
                    continue;
                }
                let double = group.e_chi_apply(psi, Side::V, &projected, true);
                assert!(
                    double.is_zero(),
                    "{spec}: {} then conjugate {} must annihilate, got {}",
                    chi.name(),
                    psi.name(),
                    double.canonical_string()
                );
            }
        }
    }
    pass(5, "master projector identity: S3 (3 chars), S4 (4 chars), C3 (3 cyclotomic chars) at D=3, with cross-character annihilation");
}

#[test]
fn criterion_06_fermionic_suite() {
    // The linear series product equals its one-line closed form up to n=6,
    // in both the anticommuting and the eps-commuting variants.
    for n in 1..=6 {
        for epsilon in [false, true] {
            assert_eq!(
                product_linear_series(n, epsilon),
                linear_series_closed_form(n, epsilon),
                "linear series closed form failed at n={n} epsilon={epsilon}"
            );
        }
    }
    for n in 2..=5 {
        verify(IdentityCase::new(IdentityName::DetFermion, n, 0));
        verify(IdentityCase::new(IdentityName::PermFermion, n, 0));
        let (lhs, rhs) = product_odd_sides(n, false);
        assert_eq!(lhs, rhs, "rank-one wedge product failed at n={n}");
    }
    // Bosonic product identities, truncated at D=4.
    for n in [2usize, 3] {
        let (lhs, rhs) = product_even_cauchy_sides(n, 4);
        assert_eq!(lhs, rhs, "geometric product identity failed at n={n}");
        let (lhs, rhs) = product_even_dual_sides(n, 4);
        assert_eq!(lhs, rhs, "dual product identity failed at n={n}");
    }
    pass(6, "fermionic series n<=6 (plain and eps), fermionic det/perm and rank-one products n=2..5, bosonic products n=2,3 at D=4");
}

#[test]
fn criterion_07_master_fermion_all_irreducibles() {
    for n in 2..=4 {
        let spec = format!("builtin:S{n}");
        let (_, table) = resolve_group(&spec, n, DEFAULT_MAX_GROUP_SIZE).unwrap();
        for idx in 0..table.len() {
            verify(
                IdentityCase::new(IdentityName::MasterFermion, n, 0)
                    .with_group(&spec)
                    .with_character(&idx.to_string()),
            );
        }
    }
    // A3 with its three characters over the third cyclotomics.
    for chi in ["chi0", "chi1", "chi2"] {
        verify(
            IdentityCase::new(IdentityName::MasterFermion, 3, 0)
                .with_group("builtin:A3")
                .with_character(chi),
        );
    }
    // A failure surfaces as a minimal counterexample term: the difference
    // serializes smallest wedge first, so a planted discrepancy at
    // u1 wedge v1 is reported exactly there.
    let original = det_fermion(2, false);
    let sreg = scalar_registry();
    let planted = original.add(&FermionElem::wedge(2, 0b01, 0b01, Poly::one(&sreg)));
    let difference = planted.sub(&original).canonical_terms();
    assert_eq!(difference, vec!["u1*v1".to_string()]);
    pass(7, "master projector identity over exterior variables: S2/S3/S4 all irreducibles, A3 cyclotomic; minimal counterexample reporting");
}

#[test]
fn criterion_08_epsilon_displays() {
    // All four displays with symbolic eps (bosonic displays at D=3), plus
    // the specializations folded into the verifier.
    for n in [2usize, 3] {
        verify(IdentityCase::new(IdentityName::Epsilon, n, 3));
    }
    for n in [2usize, 3] {
        let d = 3u32;
        // eps -> 1: the bosonic master display byte-matches the plain
        // diagonal product against the plain vector sum.
        let (ml, mr) = epsilon_master_boson_sides(n, d);
        let reg = ml.registry().clone();
        let one = Poly::one(&reg);
        let plain_lhs = plain_diag_product(&reg, d);
        let mut plain_rhs = Poly::zero(&reg);
        for m in vectors_upto(n, d as usize) {
            let mut pairs = vec![(reg.t_id(), weight(&m) as u32)];
            for (i, &mi) in m.iter().enumerate() {
                pairs.push((reg.id(Sym::F(mi)), 1));
                pairs.push((reg.id(Sym::U(i + 1)), mi as u32));
                pairs.push((reg.id(Sym::V(i + 1)), mi as u32));
            }
            plain_rhs.add_term(Monomial::from_pairs(&reg, pairs), &Coefficient::one());
        }
        assert_eq!(
            ml.substitute_one(reg.eps_id(), &one).canonical_string(),
            plain_lhs.canonical_string()
        );
        assert_eq!(
            mr.substitute_one(reg.eps_id(), &one).canonical_string(),
            plain_rhs.canonical_string()
        );
        // eps -> 1: the bosonic determinant display byte-matches the plain
        // determinant expansion builders.
        let (dl, dr) = epsilon_det_boson_sides(n, d);
        let reg = dl.registry().clone();
        let one = Poly::one(&reg);
        let (pl, pr) = det_expansion_sides(n, d);
        assert_eq!(
            dl.substitute_one(reg.eps_id(), &one).canonical_string(),
            pl.canonical_string()
        );
        assert_eq!(
            dr.substitute_one(reg.eps_id(), &one).canonical_string(),
            pr.canonical_string()
        );
        // eps -> -1 recovers the plain anticommuting displays.
        let minus = Coefficient::from_int(-1);
        assert_eq!(
            product_linear_series(n, true)
                .specialize_eps(&minus)
                .canonical_string(),
            product_linear_series(n, false).canonical_string()
        );
        assert_eq!(
            linear_series_closed_form(n, true)
                .specialize_eps(&minus)
                .canonical_string(),
            linear_series_closed_form(n, false).canonical_string()
        );
        assert_eq!(
            det_fermion(n, true).specialize_eps(&minus).canonical_string(),
            det_fermion(n, false).canonical_string()
        );
        assert_eq!(
            det_closed_form(n, true)
                .specialize_eps(&minus)
                .canonical_string(),
            det_closed_form(n, false).canonical_string()
        );
    }
    pass(8, "all four eps displays n=2,3 (bosonic at D=3); eps->1 and eps->-1 specializations byte-match the plain identities");
}

#[test]
fn criterion_09_alternating_sum_collapse() {
    assert_eq!(muir_sum(1), Coefficient::from_int(1));
    for k in 2..=7 {
        assert_eq!(muir_sum(k), Coefficient::zero(), "signed sum must vanish at k={k}");
    }
    pass(9, "signed permutation sums: 1 at k=1, identically 0 for k=2..7");
}

fn random_poly(rng: &mut ChaCha8Rng, reg: &std::sync::Arc<VarRegistry>, terms: usize) -> Poly {
    let mut p = Poly::zero(reg);
    for _ in 0..terms {
        let mut pairs = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let id = rng.gen_range(0..reg.num_vars() as u32);
            pairs.push((id, rng.gen_range(0..=2u32)));
        }
        let c = Coefficient::from_int(rng.gen_range(-5..=5i64));
        p.add_term(Monomial::from_pairs(reg, pairs), &c);
    }
    p
}

/// Total degree in (t, u-block, v-block) of one monomial.
fn euler_degrees(reg: &VarRegistry, m: &Monomial) -> (u32, u32, u32) {
    let mut t = 0;
    let mut u = 0;
    let mut v = 0;
    for &(id, e) in m.exps() {
        if id == reg.t_id() {
            t += e;
        } else if reg.is_u(id) {
            u += e;
        } else if reg.is_v(id) {
            v += e;
        }
    }
    (t, u, v)
}

/// Coefficient mass per Euler tri-degree, an invariant of variable
/// relabeling within each block.
fn euler_profile(p: &Poly) -> std::collections::BTreeMap<(u32, u32, u32), Coefficient> {
    let reg = p.registry();
    let mut map: std::collections::BTreeMap<(u32, u32, u32), Coefficient> =
        std::collections::BTreeMap::new();
    for (m, c) in p.iter() {
        let key = euler_degrees(reg, m);
        let entry = map.entry(key).or_insert_with(Coefficient::zero);
        *entry = entry.add(c);
    }
    map.retain(|_, c| !c.is_zero());
    map
}

#[test]
fn criterion_10_property_suites() {
    let start = Instant::now();

    // Character table column orthogonality for the full symmetric groups:
    // sum over irreducibles of chi(c1) * conj(chi(c2)) is the centralizer
    // order on the diagonal and zero off it.
    for n in 2..=5 {
        let group = Group::symmetric(n);
        let chars = sn_characters(&group);
        for c1 in 0..group.class_count() {
            for c2 in 0..group.class_count() {
                let mut sum = Coefficient::zero();
                for chi in &chars {
                    sum = sum.add(&chi.value(c1).mul(&chi.value(c2).conj()));
                }
                let expected = if c1 == c2 {
                    Coefficient::from_int((group.order() / group.class_size(c1)) as i64)
                } else {
                    Coefficient::zero()
                };
                assert_eq!(sum, expected, "column orthogonality failed at n={n} ({c1},{c2})");
            }
        }
    }

    // Projector idempotency on 100 randomized inputs across three groups
    // (one of them cyclotomic) and both sides.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let settings: Vec<(Group, Vec<Character>)> = [("builtin:S2", 2), ("builtin:S3", 3), ("builtin:C3", 3)]
        .into_iter()
        .map(|(spec, n)| resolve_group(spec, n, DEFAULT_MAX_GROUP_SIZE).unwrap())
        .collect();
    for k in 0..100 {
        let (group, table) = &settings[k % settings.len()];
        let chi = &table[rng.gen_range(0..table.len())];
        let reg = VarRegistry::new(group.n(), 2);
        let p = random_poly(&mut rng, &reg, 6);
        let side = if k % 2 == 0 { Side::U } else { Side::V };
        let conjugate = k % 4 < 2;
        let once = group.e_chi_apply(chi, side, &p, conjugate);
        let twice = group.e_chi_apply(chi, side, &once, conjugate);
        assert_eq!(twice, once, "projector not idempotent (sample {k})");
    }

    // Action invariants on 100 randomized inputs: composition law and
    // preservation of the Euler tri-degree profile, for the raw action and
    // for the projector.
    let perms = Perm::all(4);
    let s3 = Group::symmetric(3);
    let s3_chars = sn_characters(&s3);
    for k in 0..100 {
        let reg = VarRegistry::new(4, 1);
        let p = random_poly(&mut rng, &reg, 6);
        let g = &perms[rng.gen_range(0..perms.len())];
        let h = &perms[rng.gen_range(0..perms.len())];
        let side = if k % 2 == 0 { Side::U } else { Side::V };
        let composed = act_on_poly(&g.compose(h), &p, side);
        let stepped = act_on_poly(g, &act_on_poly(h, &p, side), side);
        assert_eq!(stepped, composed, "composition law failed (sample {k})");
        assert_eq!(
            euler_profile(&act_on_poly(g, &p, side)),
            euler_profile(&p),
            "action must preserve the Euler profile (sample {k})"
        );
        let reg3 = VarRegistry::new(3, 1);
        let q = random_poly(&mut rng, &reg3, 5);
        let chi = &s3_chars[k % s3_chars.len()];
        let projected = s3.e_chi_apply(chi, side, &q, false);
        let pre = euler_profile(&q);
        for (key, _) in euler_profile(&projected) {
            assert!(
                pre.contains_key(&key),
                "projection introduced a new Euler degree {key:?} (sample {k})"
            );
        }
    }

    // Subset-sum dynamic programming against the brute-force permutation
    // sum, determinant and permanent, on random polynomial matrices.
    for n in 2..=4 {
        let reg = VarRegistry::new(n, 1);
        for sample in 0..4 {
            let entries: Vec<Vec<Poly>> = (0..n)
                .map(|_| (0..n).map(|_| random_poly(&mut rng, &reg, 2)).collect())
                .collect();
            let matrix = PolyMatrix::from_fn(&reg, n, |i, j| entries[i][j].clone());
            let mut det_ref = Poly::zero(&reg);
            let mut perm_ref = Poly::zero(&reg);
            for g in Perm::all(n) {
                let mut prod = Poly::one(&reg);
                for (i, row) in entries.iter().enumerate() {
                    prod = prod.mul(&row[g.apply(i)]);
                }
                perm_ref = perm_ref.add(&prod);
                det_ref = det_ref.add(&if g.sign() < 0 { prod.neg() } else { prod });
            }
            assert_eq!(matrix.det(), det_ref, "determinant DP vs expansion (n={n}, {sample})");
            assert_eq!(matrix.perm(), perm_ref, "permanent DP vs expansion (n={n}, {sample})");
        }
    }

    // Schur polynomials: symmetry under every variable relabeling, and the
    // alternant rearrangement det(x_j^(m_i + n - 1 - i)) =
    // (-1)^(n choose 2) * V * s_m for all partitions of weight <= 5.
    for n in 1..=4 {
        let reg = VarRegistry::new(n, 0);
        let vmonde = vandermonde(&reg, Side::U);
        let delta = staircase(n);
        let cn2 = n * (n - 1) / 2;
        for m in partitions_upto(n, 5) {
            let s = schur(&reg, &m, Side::U);
            for g in Perm::all(n) {
                assert_eq!(
                    act_on_poly(&g, &s, Side::U),
                    s,
                    "schur must be symmetric (n={n}, m={m:?})"
                );
            }
            let shifted: Vec<usize> = m.iter().zip(&delta).map(|(&mi, &di)| mi + di).collect();
            let alternant = pow_matrix(&reg, &shifted, Side::U).det();
            let mut expected = vmonde.mul(&s);
            if cn2 % 2 == 1 {
                expected = expected.neg();
            }
            assert_eq!(alternant, expected, "alternant rearrangement (n={n}, m={m:?})");
        }
    }

    let ms = start.elapsed().as_millis();
    pass(10, &format!("orthogonality n<=5, 100 idempotency + 100 action samples, DP vs permutation sum n<=4, Schur properties to weight 5, in {ms} ms"));
}
