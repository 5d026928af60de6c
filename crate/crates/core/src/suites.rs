//! Named verification suites shared by the CLI and the acceptance tests.
//! Each case either certifies an identity exactly or reports the honest
//! outcome with a witness.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{
    check_exceptional, cochain_new, compensated_correlator_check, compensated_product_check,
    delta, delta_ex, gv_class, invariance_middle_bracket, leibniz_check, CertDepth, Cochain,
    DeltaSigns, ExSigns, ExceptionalCochain,
};
use crate::eprod::{
    commutator_product, partial_product, sigma_on_product, slot, split_independence_check,
    EpsProduct, ExclusionMap, PairingMode, SlotContent,
};
use crate::ratfunc::{q, RatFunc, Scalar, Var};
use crate::report::{config_echo, CaseReport, Report};
use crate::voa::{
    basis, dual_basis_for, gv_basis_state, gv_scale, gv_vacuum, mode_action,
    virasoro, GradedVector, VoaContext,
};
use crate::wspace::{check_l0, check_l_minus1, e_element, shuffle_sum, shuffles, Correlator};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct SuiteParams {
    pub n_max: u32,
    pub l_max: i64,
    pub lambda: Scalar,
    pub seed: u64,
    pub signs: DeltaSigns,
    pub ex_signs: ExSigns,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            n_max: 6,
            l_max: 4,
            lambda: Scalar::from_integer(1.into()),
            seed: 0,
            signs: DeltaSigns::default(),
            ex_signs: ExSigns::default(),
        }
    }
}

impl SuiteParams {
    pub fn ctx(&self) -> Result<VoaContext> {
        VoaContext::new(self.n_max, self.l_max, self.lambda.clone())
    }

    fn sign_name(&self) -> String {
        if self.signs == DeltaSigns::default() && self.ex_signs == ExSigns::default() {
            "default".into()
        } else {
            format!("{:?}/{:?}", self.signs, self.ex_signs)
        }
    }
}

pub const SUITES: &[&str] = &[
    "delta2",
    "leibniz",
    "shuffle",
    "lproperties",
    "product-closure",
    "split",
    "coord",
    "gv",
    "oracle",
];

/// Seeded sample of small distinct rationals used as configuration points.
pub fn sample_points(seed: u64, count: usize) -> Vec<Scalar> {
    let pool: Vec<i64> = vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = pool.clone();
    p.shuffle(&mut rng);
    p.into_iter().take(count).map(q).collect()
}

fn zr(i: u32) -> RatFunc {
    RatFunc::var(Var::z(i))
}

fn a() -> GradedVector {
    gv_basis_state(vec![1])
}

fn aa() -> GradedVector {
    gv_basis_state(vec![1, 1])
}

fn a2() -> GradedVector {
    gv_basis_state(vec![2])
}

fn weight_family(max_w: u32, ctx: &VoaContext) -> Vec<GradedVector> {
    (0..=max_w)
        .flat_map(|w| basis(w, ctx.n_max).expect("within cutoff"))
        .map(gv_basis_state)
        .collect()
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<Report> {
    let ctx = params.ctx()?;
    let cases = match name {
        "delta2" => suite_delta2(params, &ctx)?,
        "leibniz" => suite_leibniz(params, &ctx)?,
        "shuffle" => suite_shuffle(params, &ctx)?,
        "lproperties" => suite_lproperties(params, &ctx)?,
        "product-closure" => suite_product_closure(params, &ctx)?,
        "split" => suite_split(params, &ctx)?,
        "coord" => suite_coord(params)?,
        "gv" => suite_gv(params, &ctx)?,
        "oracle" => suite_oracle(params)?,
        "all" => {
            let mut all = Vec::new();
            for s in SUITES {
                all.extend(run_suite(s, params)?.cases);
            }
            all
        }
        "" => Vec::new(),
        other => return Err(Error::Invalid(format!("unknown suite {other}"))),
    };
    let mut report = Report::new(
        name,
        config_echo(
            params.n_max,
            params.l_max,
            &params.lambda,
            params.seed,
            &params.sign_name(),
        ),
        cases,
    );
    report.truncation_drops = ctx.truncation_drops();
    Ok(report)
}

/// Cocycle condition and the exceptional complex.
fn suite_delta2(params: &SuiteParams, ctx: &VoaContext) -> Result<Vec<CaseReport>> {
    let mut cases = Vec::new();
    let states = [a(), aa(), a2()];
    let duals = [gv_vacuum(), a(), aa()];
    for n in 0..=2usize {
        for gen in [gv_vacuum(), a()] {
            let phi = Cochain::from_e(e_element(gen.clone(), n), 3);
            let dd = delta(&delta(&phi, params.signs)?, params.signs)?;
            let mut ok = true;
            let mut detail = String::new();
            'fam: for wp in &duals {
                for st in &states {
                    let mut ins: Vec<(GradedVector, RatFunc)> = Vec::new();
                    for i in 0..n + 2 {
                        let v = if i == 0 { st.clone() } else { a() };
                        ins.push((v, zr(i as u32 + 1)));
                    }
                    let v = dd.eval_r(wp, &ins, ctx)?;
                    if !v.is_zero() {
                        ok = false;
                        detail = format!("nonzero at n={n}: {v}");
                        break 'fam;
                    }
                }
            }
            let id = format!(
                "delta2/n{n}/gen-{}",
                crate::voa::state_to_string(&gen).replace(' ', "")
            );
            cases.push(if ok {
                CaseReport::pass(id)
            } else {
                CaseReport::fail(id, detail)
            });
        }
    }
    // exceptional composition under the configured signs
    let phi = Cochain::from_e(e_element(gv_vacuum(), 1), 2);
    let dphi = delta(&phi, params.signs)?;
    let ex = ExceptionalCochain {
        inner: dphi.clone(),
        signs: params.ex_signs,
    };
    let dex = delta_ex(&ex)?;
    let mut ok = true;
    let mut detail = String::new();
    for wp in &duals {
        for st in &states {
            let ins = [(st.clone(), zr(1)), (a(), zr(2)), (a(), zr(3))];
            let v = dex.eval_r(wp, &ins, ctx)?;
            if !v.is_zero() {
                ok = false;
                detail = format!("delta_ex∘delta ≠ 0: {v}");
            }
        }
    }
    cases.push(if ok {
        CaseReport::pass("delta2/exceptional-composition")
    } else {
        CaseReport::fail("delta2/exceptional-composition", detail)
    });
    // sign audit: printed exceptional signs must break the composition
    let ex_printed = ExceptionalCochain {
        inner: dphi,
        signs: ExSigns::printed(),
    };
    let dex_p = delta_ex(&ex_printed)?;
    let mut printed_nonzero = false;
    for wp in &duals {
        let ins = [(aa(), zr(1)), (a(), zr(2)), (a(), zr(3))];
        if !dex_p.eval_r(wp, &ins, ctx)?.is_zero() {
            printed_nonzero = true;
        }
    }
    cases.push(if printed_nonzero {
        CaseReport::pass("delta2/sign-audit-printed-alternative-fails")
    } else {
        CaseReport::fail(
            "delta2/sign-audit-printed-alternative-fails",
            "printed exceptional signs unexpectedly satisfy the composition",
        )
    });
    // chain inclusion: delta vs delta_ex on C²₁
    let phi2 = Cochain::from_e(e_element(gv_vacuum(), 2), 1);
    let d_plain = delta(&phi2, params.signs)?;
    let samples = vec![
        (gv_vacuum(), vec![(a(), zr(1)), (a(), zr(2)), (aa(), zr(3))]),
        (aa(), vec![(a(), zr(1)), (a(), zr(2)), (aa(), zr(3))]),
    ];
    let certified = check_exceptional(&phi2, params.ex_signs, &samples, ctx)?;
    let d_ex = delta_ex(&certified)?;
    let mut ok = true;
    for (wp, ins) in &samples {
        if d_plain.eval_r(wp, ins, ctx)? != d_ex.eval_r(wp, ins, ctx)? {
            ok = false;
        }
    }
    cases.push(if ok {
        CaseReport::pass("delta2/inclusion-dual-path")
    } else {
        CaseReport::fail("delta2/inclusion-dual-path", "delta vs delta_ex mismatch")
    });
    Ok(cases)
}

/// Leibniz law, faithful comparison; the honest outcome carries witnesses.
fn suite_leibniz(_params: &SuiteParams, ctx: &VoaContext) -> Result<Vec<CaseReport>> {
    let mut cases = Vec::new();
    let pairs: [(usize, usize); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let duals = [gv_vacuum(), a(), aa()];
    for (k, n) in pairs {
        let phi = Cochain::from_e(e_element(gv_vacuum(), k), 2);
        let psi = Cochain::from_e(e_element(gv_vacuum(), n), 2);
        // slots: one weight-2 state to defeat parity, currents elsewhere
        let mut slots: Vec<SlotContent> = Vec::new();
        for i in 0..(k + n + 1) {
            let st = if i == 0 { aa() } else { a() };
            slots.push(slot(&st, zr(i as u32 + 1)));
        }
        let mut worst: Option<(i64, RatFunc, RatFunc)> = None;
        let mut all_hold = true;
        for wp in &duals {
            let rep = leibniz_check(&phi, &psi, wp, &slots, ctx)?;
            if !rep.holds {
                all_hold = false;
                if worst.is_none() {
                    worst = rep.witness;
                }
            }
        }
        let id = format!("leibniz/k{k}-n{n}");
        cases.push(if all_hold {
            CaseReport::pass(id)
        } else {
            let (ord, lhs, rhs) = worst.unwrap();
            CaseReport::fail(
                id,
                "coefficientwise Leibniz comparison fails (formal cross terms survive)",
            )
            .with_witness(format!("eps^{ord}: lhs = {lhs}, rhs = {rhs}"))
        });
        // the double-coboundary consequence still holds on products
        let ddslots: Vec<SlotContent> = (0..(k + n + 2))
            .map(|i| {
                let st = if i == 0 { aa() } else { a() };
                slot(&st, zr(i as u32 + 1))
            })
            .collect();
        let dd = crate::complex::delta_delta_product(&phi, &psi, &duals[1], &ddslots, ctx)?;
        cases.push(if dd.is_zero() {
            CaseReport::pass(format!("leibniz/double-delta-product-k{k}-n{n}"))
        } else {
            CaseReport::fail(
                format!("leibniz/double-delta-product-k{k}-n{n}"),
                "δδ(product) nonzero",
            )
        });
    }
    Ok(cases)
}

/// Shuffle vanishing for correlators and for products.
fn suite_shuffle(params: &SuiteParams, ctx: &VoaContext) -> Result<Vec<CaseReport>> {
    let _ = params;
    let mut cases = Vec::new();
    let duals = [gv_vacuum(), a(), aa()];
    let states = weight_family(2, ctx);
    // n = 2: antisymmetrization of symmetric correlators vanishes
    let mut ok = true;
    for wp in &duals {
        for st in &states {
            let e2 = e_element(gv_vacuum(), 2);
            let ins = [(st.clone(), zr(1)), (a(), zr(2))];
            if !shuffle_sum(&e2, 1, wp, &ins, ctx)?.is_zero() {
                ok = false;
            }
        }
    }
    cases.push(if ok {
        CaseReport::pass("shuffle/correlator-n2")
    } else {
        CaseReport::fail("shuffle/correlator-n2", "nonzero antisymmetrization")
    });
    // n = 3: the sign sum over J_{3;s} is +1, so symmetric correlators keep
    // their value; report the honest outcome with the witness.
    let e3 = e_element(gv_vacuum(), 3);
    let ins3 = [(a(), zr(1)), (a(), zr(2)), (aa(), zr(3))];
    let mut witness = None;
    for s in 1..=2usize {
        let v = shuffle_sum(&e3, s, &gv_vacuum(), &ins3, ctx)?;
        if !v.is_zero() {
            witness = Some((s, v));
        }
    }
    cases.push(match witness {
        None => CaseReport::pass("shuffle/correlator-n3"),
        Some((s, v)) => CaseReport::fail(
            "shuffle/correlator-n3",
            format!("symmetric E-elements cannot satisfy the ({}, split {s}) shuffle sum", 3),
        )
        .with_witness(format!("sum = {v}")),
    });
    // products: k = n = 1 shuffle sum over the merged slots
    let phi = e_element(gv_vacuum(), 1);
    let psi = e_element(gv_vacuum(), 1);
    let excl = ExclusionMap::disjoint(1, 1, vec![Var::z(1), Var::z(2)]);
    let prod = EpsProduct::new(&phi, &psi, excl);
    let slots = vec![slot(&a(), zr(1)), slot(&a(), zr(2))];
    let mut acc = crate::ratfunc::EpsSeries::zero(ctx.l_max);
    for (sigma, sign) in shuffles(2, 1) {
        let tau = crate::wspace::invert_perm(&sigma);
        let v = sigma_on_product(&prod, &tau, &gv_vacuum(), &slots, ctx)?;
        acc = if sign >= 0 { acc.add(&v) } else { acc.sub(&v) };
    }
    cases.push(if acc.is_zero() {
        CaseReport::pass("shuffle/product-k1n1")
    } else {
        let ord = acc.lowest_order().unwrap();
        CaseReport::fail(
            "shuffle/product-k1n1",
            "moving arguments across the pairing changes the series (ζ-asymmetry)",
        )
        .with_witness(format!("eps^{ord}: {}", acc.coeff(ord)?))
    });
    Ok(cases)
}

/// L(-1)-derivative, L(0)-conjugation, and their product versions.
fn suite_lproperties(params: &SuiteParams, ctx: &VoaContext) -> Result<Vec<CaseReport>> {
    let _ = params;
    let mut cases = Vec::new();
    let duals = [gv_vacuum(), a(), aa()];
    // correlators
    let mut ok = true;
    let mut detail = String::new();
    for gen in [gv_vacuum(), a()] {
        for wp in &duals {
            for st in [a(), aa(), a2()] {
                let e = e_element(gen.clone(), 2);
                let ins = [(st.clone(), Var::z(1)), (a(), Var::z(2))];
                if let Err(e1) = check_l_minus1(&e, wp, &ins, ctx) {
                    ok = false;
                    detail = e1.to_string();
                }
                if let Err(e2) = check_l0(&e, wp, &ins, &q(3), ctx) {
                    ok = false;
                    detail = e2.to_string();
                }
            }
        }
    }
    cases.push(if ok {
        CaseReport::pass("lprops/correlators")
    } else {
        CaseReport::fail("lprops/correlators", detail)
    });
    // products: ∂_s routed as L(-1)-insertion equals the coefficientwise
    // derivative (disjoint parameters)
    let phi = e_element(gv_vacuum(), 1);
    let psi = e_element(gv_vacuum(), 1);
    let excl = ExclusionMap::disjoint(1, 1, vec![Var::z(1), Var::z(2)]);
    let prod = EpsProduct::new(&phi, &psi, excl);
    let mut ok = true;
    for wp in &duals {
        for st in [a(), aa()] {
            let slots = vec![slot(&st, zr(1)), slot(&a(), zr(2))];
            let base = prod.eval(wp, &slots, ctx)?;
            for (s, v) in [(0usize, Var::z(1)), (1, Var::z(2))] {
                let routed = partial_product(&prod, s, wp, &slots, ctx)?;
                let direct = base.map_coeffs(|f| f.derivative(v));
                if routed != direct {
                    ok = false;
                }
            }
        }
    }
    cases.push(if ok {
        CaseReport::pass("lprops/product-derivative")
    } else {
        CaseReport::fail("lprops/product-derivative", "routed ∂ differs from derivative")
    });
    // L(0)-homogeneity of product coefficients including ζ-scaling: each
    // ε^l coefficient is homogeneous of degree wt(w') - Σwt - 2l under
    // scaling of all z's and ζ's (the basis insertions carry weight l each).
    let mut ok = true;
    let mut detail = String::new();
    let t = q(2);
    for (wp, wdeg) in [(gv_vacuum(), 0i64), (aa(), 2i64)] {
        let slots = vec![slot(&a(), zr(1)), slot(&a(), zr(2))];
        let base = prod.eval(&wp, &slots, ctx)?;
        for (l, coeff) in base.orders() {
            let mut bind = std::collections::BTreeMap::new();
            for v in [Var::z(1), Var::z(2), Var::zeta(1), Var::zeta(2)] {
                bind.insert(v, RatFunc::var(v).scale(&t));
            }
            let scaled = coeff.substitute(&bind)?;
            let deg = wdeg - 2 - 2 * l;
            let factor = RatFunc::constant(t.clone()).pow(deg)?;
            if scaled != coeff.mul(&factor) {
                ok = false;
                detail = format!("order {l}: inhomogeneous");
            }
        }
    }
    cases.push(if ok {
        CaseReport::pass("lprops/product-l0-scaling")
    } else {
        CaseReport::fail("lprops/product-l0-scaling", detail)
    });
    Ok(cases)
}

/// Pole certificates, dual-basis independence, and composability closure of
/// products.
fn suite_product_closure(params: &SuiteParams, ctx: &VoaContext) -> Result<Vec<CaseReport>> {
    let mut cases = Vec::new();
    let duals = [gv_vacuum(), a(), aa()];
    // pole locus of every computed coefficient
    let phi = e_element(gv_vacuum(), 2);
    let psi = e_element(gv_vacuum(), 1);
    let excl = ExclusionMap::disjoint(2, 1, vec![Var::z(1), Var::z(2), Var::z(3)]);
    let prod = EpsProduct::new(&phi, &psi, excl);
    let slots = vec![slot(&a(), zr(1)), slot(&aa(), zr(2)), slot(&a(), zr(3))];
    let allowed: Vec<crate::ratfunc::MPoly> = {
        let z1 = zr(1);
        let z2 = zr(2);
        let z3 = zr(3);
        let zeta1 = RatFunc::var(Var::zeta(1));
        let zeta2 = RatFunc::var(Var::zeta(2));
        [
            z1.sub(&z2),
            z1.sub(&z3),
            z2.sub(&z3),
            z1.add(&zeta1),
            z2.add(&zeta1),
            z3.add(&zeta2),
            zeta1,
            zeta2,
            z1,
            z2,
            z3,
        ]
        .iter()
        .map(|f| f.numerator().monic().0)
        .collect()
    };
    let mut ok = true;
    let mut detail = String::new();
    for wp in &duals {
        let s = prod.eval(wp, &slots, ctx)?;
        for (l, coeff) in s.orders() {
            for (fac, mult) in coeff.den_factors() {
                if !allowed.iter().any(|p| p == fac) {
                    ok = false;
                    detail = format!("order {l}: pole at {fac} (mult {mult})");
                }
            }
            // diagonal orders within the weight-sum certificates
            let states = [a(), aa(), a()];
            for i in 0..3 {
                for j in (i + 1)..3 {
                    let d = zr(i as u32 + 1).sub(&zr(j as u32 + 1)).numerator().monic().0;
                    let bound = Correlator::pole_bound(&states[i], &states[j]);
                    let order = coeff.pole_order(&d);
                    if order > bound {
                        ok = false;
                        detail = format!("diagonal z{}-z{} order {order} > {bound}", i + 1, j + 1);
                    }
                }
            }
        }
    }
    cases.push(if ok {
        CaseReport::pass("product/pole-certificates")
    } else {
        CaseReport::fail("product/pole-certificates", detail)
    });
    // dual-basis independence against a seeded remixed basis at levels ≤ 3
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(17));
    let remix = |l: u32| -> Result<Vec<(GradedVector, GradedVector)>> {
        let parts = basis(l, ctx.n_max)?;
        let mut local = ChaCha8Rng::seed_from_u64(
            params.seed.wrapping_add(l as u64).wrapping_mul(31).wrapping_add(7),
        );
        let picks: Vec<i64> = (0..parts.len() * parts.len())
            .map(|_| {
                let opts = [1i64, 2, 3, 0, 1];
                *opts.choose(&mut local).unwrap()
            })
            .collect();
        let mut vs: Vec<GradedVector> = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            let mut v = GradedVector::new();
            crate::voa::gv_add_term(&mut v, p.clone(), q(5));
            for (j, p2) in parts.iter().enumerate() {
                if i != j {
                    crate::voa::gv_add_term(&mut v, p2.clone(), q(picks[i * parts.len() + j]));
                }
            }
            vs.push(v);
        }
        let ds = dual_basis_for(&vs, ctx)?;
        Ok(vs.into_iter().zip(ds).collect())
    };
    let _ = &mut rng;
    let phi1 = e_element(gv_vacuum(), 1);
    let psi1 = e_element(gv_vacuum(), 1);
    let excl1 = ExclusionMap::disjoint(1, 1, vec![Var::z(1), Var::z(2)]);
    let prod1 = EpsProduct::new(&phi1, &psi1, excl1);
    let slots1 = vec![slot(&a(), zr(1)), slot(&aa(), zr(2))];
    let mut ok = true;
    for wp in &duals {
        let std = prod1.eval(wp, &slots1, ctx)?;
        let mixed = prod1.eval_with(wp, &PairingMode::Printed, &slots1, ctx, &remix)?;
        if std != mixed {
            ok = false;
        }
    }
    cases.push(if ok {
        CaseReport::pass("product/dual-basis-independence")
    } else {
        CaseReport::fail("product/dual-basis-independence", "remixed basis changed the series")
    });
    // closure: merged product passes the composability certificates
    let phi_c = cochain_new(e_element(gv_vacuum(), 2), 2, 1, CertDepth::default(), ctx);
    cases.push(match phi_c {
        Ok(_) => CaseReport::pass("product/composability-certificates"),
        Err(e) => CaseReport::fail("product/composability-certificates", e.to_string()),
    });
    Ok(cases)
}

/// Split independence, degenerate and nontrivial.
fn suite_split(params: &SuiteParams, ctx: &VoaContext) -> Result<Vec<CaseReport>> {
    let _ = params;
    let mut cases = Vec::new();
    let merged = vec![(a(), zr(1)), (a(), zr(2))];
    let vars = [Var::z(1), Var::z(2)];
    let degenerate = split_independence_check(
        &gv_vacuum(),
        &gv_vacuum(),
        &gv_vacuum(),
        &merged,
        &vars,
        0,
        2,
        ctx,
    )?;
    cases.push(if degenerate.equal {
        CaseReport::pass("split/degenerate-s0-vs-s2")
    } else {
        CaseReport::fail("split/degenerate-s0-vs-s2", "degenerate splits disagree")
    });
    let nontrivial = split_independence_check(
        &gv_vacuum(),
        &gv_vacuum(),
        &gv_vacuum(),
        &merged,
        &vars,
        1,
        2,
        ctx,
    )?;
    cases.push(if nontrivial.equal {
        CaseReport::pass("split/s1-vs-s2")
    } else {
        let (ord, ca, cb) = nontrivial.witness.unwrap();
        CaseReport::fail(
            "split/s1-vs-s2",
            "factorization splits are inequivalent as formal series",
        )
        .with_witness(format!("eps^{ord}: s1 = {ca}, s2 = {cb}"))
    });
    Ok(cases)
}

/// Coordinate canonicity at N_max = 4 with ρ(z) = z + a₂z².
fn suite_coord(params: &SuiteParams) -> Result<Vec<CaseReport>> {
    let ctx = VoaContext::new(4.min(params.n_max).max(4), 2, params.lambda.clone())?;
    let mut cases = Vec::new();
    let mut rho: Vec<RatFunc> = vec![RatFunc::zero(); 4];
    rho[0] = RatFunc::one();
    rho[1] = RatFunc::constant(crate::ratfunc::qr(1, 2));
    // correlator invariance
    let ops = [(a(), zr(1)), (a(), zr(2))];
    let mut ok = true;
    let mut detail = String::new();
    for wp in [gv_vacuum(), aa()] {
        let out = compensated_correlator_check(&wp, &ops, &gv_vacuum(), &rho, &ctx)?;
        if !out.ok {
            ok = false;
            detail = format!(
                "defect at order {:?}, guaranteed {}",
                out.defect_order, out.guaranteed_order
            );
        }
    }
    cases.push(if ok {
        CaseReport::pass("coord/current-correlator")
    } else {
        CaseReport::fail("coord/current-correlator", detail)
    });
    // ε-product invariance, coefficientwise
    let outs = compensated_product_check(
        &gv_vacuum(),
        &[(a(), zr(1))],
        &[(a(), zr(2))],
        &rho,
        &ctx,
    )?;
    let mut ok = true;
    let mut detail = String::new();
    for (l, o) in &outs {
        if !o.ok {
            ok = false;
            detail = format!(
                "eps^{l}: defect at {:?}, guaranteed {}",
                o.defect_order, o.guaranteed_order
            );
        }
    }
    cases.push(if ok {
        CaseReport::pass("coord/current-product")
    } else {
        CaseReport::fail("coord/current-product", detail)
    });
    Ok(cases)
}

/// Commutator structure, class invariance, and the witness search.
fn suite_gv(params: &SuiteParams, ctx: &VoaContext) -> Result<Vec<CaseReport>> {
    let mut cases = Vec::new();
    // Φ·Φ = 0
    let phi1 = e_element(gv_vacuum(), 1);
    let excl = ExclusionMap::with_pairs(1, 1, vec![(0, 0)], vec![Var::z(1)]);
    let slots = vec![slot(&a(), zr(1))];
    let mut ok = true;
    for wp in [gv_vacuum(), a(), aa()] {
        let s = commutator_product(&phi1, &phi1, &excl, &wp, &slots, ctx)?;
        if !s.is_zero() {
            ok = false;
        }
    }
    cases.push(if ok {
        CaseReport::pass("gv/self-product-vanishes")
    } else {
        CaseReport::fail("gv/self-product-vanishes", "Φ·Φ ≠ 0")
    });
    // class-invariance middle bracket
    let phi = Cochain::from_e(e_element(gv_vacuum(), 1), 2);
    let eta = Cochain::from_e(e_element(a(), 1), 2);
    let mut ok = true;
    for wp in [gv_vacuum(), a(), aa()] {
        let s = invariance_middle_bracket(&phi, &eta, params.signs, &wp, ctx)?;
        if !s.is_zero() {
            ok = false;
        }
    }
    cases.push(if ok {
        CaseReport::pass("gv/invariance-middle-bracket")
    } else {
        CaseReport::fail("gv/invariance-middle-bracket", "bracket nonzero")
    });
    // witness search (explicit nonvanishing or honest vanishing report)
    let pts: Vec<RatFunc> = sample_points(params.seed, 3)
        .into_iter()
        .map(RatFunc::constant)
        .collect();
    let duals: Vec<(String, GradedVector)> = weight_family(2, ctx)
        .into_iter()
        .map(|v| (crate::voa::state_to_string(&v), v))
        .collect();
    let rep = gv_class(&phi, params.signs, &duals, &pts, ctx)?;
    let mut case = match &rep.witness {
        Some((name, ord, val)) => CaseReport::pass("gv/class-witness")
            .with_witness(format!("dual {name}, eps^{ord}: {val}")),
        None => CaseReport {
            id: "gv/class-witness".into(),
            status: "vanishing-at-truncation".into(),
            detail: Some("no nonzero coefficient found on the sampled family".into()),
            witness: None,
            truncation_losses: 0,
        },
    };
    case.detail = Some(format!(
        "closedness on family: {} ({} failures)",
        rep.closed_on_family, rep.closedness_failures
    ));
    cases.push(case);
    Ok(cases)
}

/// Oracle equivalence: Wick pairing for pure currents and the Virasoro
/// bracket against direct mode composition.
fn suite_oracle(params: &SuiteParams) -> Result<Vec<CaseReport>> {
    // the bracket needs headroom: weights ≤ 4 plus |m|,|n| ≤ 3
    let ctx = VoaContext::new(params.n_max.max(8), params.l_max, params.lambda.clone())?;
    let mut cases = Vec::new();
    // pure-current correlators vs the perfect-matching pairing formula
    let k = |i: u32, j: u32| zr(i).sub(&zr(j)).pow(-2).expect("distinct");
    let two = e_element(gv_vacuum(), 2)
        .evaluate(&gv_vacuum(), &[(a(), zr(1)), (a(), zr(2))], &ctx)?;
    let four = e_element(gv_vacuum(), 4).evaluate(
        &gv_vacuum(),
        &[(a(), zr(1)), (a(), zr(2)), (a(), zr(3)), (a(), zr(4))],
        &ctx,
    )?;
    let three = e_element(gv_vacuum(), 3)
        .evaluate(&gv_vacuum(), &[(a(), zr(1)), (a(), zr(2)), (a(), zr(3))], &ctx)?;
    let pairing4 = k(1, 2)
        .mul(&k(3, 4))
        .add(&k(1, 3).mul(&k(2, 4)))
        .add(&k(1, 4).mul(&k(2, 3)));
    let ok = two == k(1, 2) && three.is_zero() && four == pairing4;
    cases.push(if ok {
        CaseReport::pass("oracle/wick-pairing-currents")
    } else {
        CaseReport::fail("oracle/wick-pairing-currents", "pairing formula mismatch")
    });
    // Virasoro bracket oracle
    let mut ok = true;
    let mut detail = String::new();
    'outer: for m in -3..=3i64 {
        for n in -3..=3i64 {
            for w in 0..=4u32 {
                for p in basis(w, ctx.n_max)? {
                    let u = gv_basis_state(p.clone());
                    let lhs = {
                        let x = virasoro(n, &u, &ctx);
                        let ab = virasoro(m, &x, &ctx);
                        let y = virasoro(m, &u, &ctx);
                        let ba = virasoro(n, &y, &ctx);
                        let mut out = ab;
                        for (pp, c) in ba {
                            crate::voa::gv_add_term(&mut out, pp, -c);
                        }
                        out
                    };
                    let mut rhs = gv_scale(&virasoro(m + n, &u, &ctx), &q(m - n));
                    if m + n == 0 {
                        let central = crate::ratfunc::qr(m * m * m - m, 12);
                        for (pp, c) in &u {
                            crate::voa::gv_add_term(&mut rhs, pp.clone(), c * &central);
                        }
                    }
                    if lhs != rhs {
                        ok = false;
                        detail = format!("bracket mismatch at m={m}, n={n}, {p:?}");
                        break 'outer;
                    }
                }
            }
        }
    }
    cases.push(if ok {
        CaseReport::pass("oracle/virasoro-bracket")
    } else {
        CaseReport::fail("oracle/virasoro-bracket", detail)
    });
    // a mixed-state correlator against the mode-expansion oracle
    let e1 = e_element(a(), 1);
    let got = e1.evaluate(&aa(), &[(a(), zr(1))], &ctx)?;
    let n_mode = 1 + 1 - 2 - 1; // wt v + wt w - wt w' - 1
    let comp = mode_action(&a(), n_mode, &a(), &ctx);
    let coeff = comp.get(&vec![1, 1]).cloned().unwrap_or_else(|| q(0));
    let expect = if coeff == q(0) {
        RatFunc::zero()
    } else {
        zr(1).pow(-n_mode - 1)?.scale(&coeff)
    };
    cases.push(if got == expect {
        CaseReport::pass("oracle/mode-expansion-one-point")
    } else {
        CaseReport::fail("oracle/mode-expansion-one-point", "mode oracle mismatch")
    });
    Ok(cases)
}
