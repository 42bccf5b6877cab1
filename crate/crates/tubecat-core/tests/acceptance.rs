//! Acceptance suite: end-to-end reproduction of all golden results, with
//! pinned tolerances and one PASS/FAIL line per criterion.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use tubecat_core::catalog::{self, CatalogEntry, CatalogOptions, PHI};
use tubecat_core::channel::{
    apply_channel, assemble_isometry, completeness_residual, gauge_rotate, solve_channel_basis,
    total_trace, transition_probabilities, DensityMatrix, SolveOutcome,
};
use tubecat_core::charges::{identify, verify_charge, GeneralisedCharge};
use tubecat_core::fusion::{validate_pentagon, Bicharacter};
use tubecat_core::numerics::{is_isometry, orthonormalize, ComplexMatrix};
use tubecat_core::tube::verify_against_reference;
use tubecat_core::Tolerance;

struct Criterion {
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Criterion { name, failures: vec![] }
    }

    fn check(&mut self, label: &str, ok: bool) {
        if !ok {
            self.failures.push(label.to_string());
        }
    }

    fn close(&mut self, val: f64, expected: f64, tol: f64, label: &str) {
        let d = (val - expected).abs();
        self.check(&format!("{label} (|{val:.3e} - {expected:.3e}| = {d:.3e} > {tol:.0e})"), d <= tol);
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("{}: PASS", self.name);
        } else {
            println!("{}: FAIL — {}", self.name, self.failures.join("; "));
            panic!("{} failed: {:?}", self.name, self.failures);
        }
    }
}

fn find<'a>(entry: &'a CatalogEntry, name: &str) -> &'a GeneralisedCharge {
    entry
        .charges
        .iter()
        .find(|u| u.name == name)
        .unwrap_or_else(|| panic!("charge {name} missing"))
}

fn stacked(entry: &CatalogEntry, charge: &str, defect: &str, source: &str) -> ComplexMatrix {
    let src = entry.tube.object_id(source).unwrap();
    let basis = catalog::standard_channel_basis(entry, defect, src).unwrap();
    assemble_isometry(&entry.tube, find(entry, charge), &basis)
        .unwrap()
        .stacked
}

fn probs(entry: &CatalogEntry, charge: &str, defect: &str, source: &str) -> (Vec<f64>, f64) {
    let src = entry.tube.object_id(source).unwrap();
    let basis = catalog::standard_channel_basis(entry, defect, src).unwrap();
    let r = transition_probabilities(&entry.tube, find(entry, charge), &basis, None).unwrap();
    (r.entries.iter().map(|e| e.probability).collect(), r.total)
}

fn vec_close(c: &mut Criterion, got: &ComplexMatrix, want: &[Complex64], tol: f64, label: &str) {
    c.check(&format!("{label}: shape {}x{}", got.rows, got.cols), got.rows == want.len() && got.cols == 1);
    if got.rows == want.len() && got.cols == 1 {
        for (i, w) in want.iter().enumerate() {
            let d = (got[(i, 0)] - w).norm();
            c.check(&format!("{label}[{i}] off by {d:.3e}"), d <= tol);
        }
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Drop the probabilities of zero-dimensional target blocks (their Kraus
/// operators have no rows) so that entry lists match the printed tables.
fn nonzero_sector_probs(entry: &CatalogEntry, charge: &str, defect: &str, source: &str) -> Vec<f64> {
    let src = entry.tube.object_id(source).unwrap();
    let basis = catalog::standard_channel_basis(entry, defect, src).unwrap();
    let u = find(entry, charge);
    let r = transition_probabilities(&entry.tube, u, &basis, None).unwrap();
    r.entries
        .iter()
        .filter(|e| u.sector_dims[e.target] > 0)
        .map(|e| e.probability)
        .collect()
}

#[test]
fn criterion_1_rep_s3_reproduction() {
    let mut c = Criterion::new("ACCEPTANCE 1 (Rep(S3) reproduction)");
    let entry = catalog::load("rep-s3").unwrap();
    let report = verify_against_reference(&entry.tube, entry.reference.as_ref().unwrap()).unwrap();
    c.check("tube tables match reference", report.pass && report.max_residual <= 1e-10);
    c.check("8 charges", entry.charges.len() == 8);
    let sq: usize = entry.charges.iter().map(|u| u.total_dim().pow(2)).sum();
    c.check("sum of squared dims = 17", sq == 17);

    let s3 = 3f64.sqrt();
    let s2 = 2f64.sqrt();
    vec_close(&mut c, &stacked(&entry, "U_1_psi", "pi", "1"), &[re(-0.5), re(s3 / 2.0)], 1e-10, "U_1_psi (pi)_1");
    vec_close(&mut c, &stacked(&entry, "U_1_psi", "pi", "psi"), &[re(s3 / 2.0), re(0.5)], 1e-10, "U_1_psi (pi)_psi");
    vec_close(&mut c, &stacked(&entry, "U_1_pi", "pi", "1"), &[re(0.0), re(1.0)], 1e-10, "U_1_pi (pi)_1");
    vec_close(
        &mut c,
        &stacked(&entry, "U_1_pi", "pi", "pi"),
        &[re(s2 / 2.0), re(0.5), re(0.5), re(0.0)],
        1e-10,
        "U_1_pi (pi)_pi",
    );
    vec_close(&mut c, &stacked(&entry, "U_psi_pi", "pi", "psi"), &[re(0.0), re(1.0)], 1e-10, "U_psi_pi (pi)_psi");
    vec_close(
        &mut c,
        &stacked(&entry, "U_psi_pi", "pi", "pi"),
        &[re(-s2 / 2.0), re(-0.5), re(-0.5), re(0.0)],
        1e-10,
        "U_psi_pi (pi)_pi",
    );

    let p = nonzero_sector_probs(&entry, "U_1_psi", "pi", "1");
    for (got, want) in p.iter().zip([0.25, 0.75]) {
        c.close(*got, want, 1e-12, "U_1_psi probs from 1");
    }
    let p = nonzero_sector_probs(&entry, "U_1_psi", "pi", "psi");
    for (got, want) in p.iter().zip([0.75, 0.25]) {
        c.close(*got, want, 1e-12, "U_1_psi probs from psi");
    }
    let p = nonzero_sector_probs(&entry, "U_1_pi", "pi", "1");
    for (got, want) in p.iter().zip([0.0, 1.0]) {
        c.close(*got, want, 1e-12, "U_1_pi probs from 1");
    }
    let p = nonzero_sector_probs(&entry, "U_1_pi", "pi", "pi");
    for (got, want) in p.iter().zip([0.5, 0.25, 0.25, 0.0]) {
        c.close(*got, want, 1e-12, "U_1_pi probs from pi");
    }
    c.finish();
}

#[test]
fn criterion_2_fibonacci_reproduction() {
    let mut c = Criterion::new("ACCEPTANCE 2 (Fibonacci reproduction)");
    let entry = catalog::load("fib").unwrap();
    let report = verify_against_reference(&entry.tube, entry.reference.as_ref().unwrap()).unwrap();
    c.check("tube tables match reference", report.pass && report.max_residual <= 1e-10);
    c.check("4 charges", entry.charges.len() == 4);
    let sq: usize = entry.charges.iter().map(|u| u.total_dim().pow(2)).sum();
    c.check("sum of squared dims = 7", sq == 7);

    for name in ["U_tau_+", "U_tau_-"] {
        let p = nonzero_sector_probs(&entry, name, "tau", "tau");
        for (got, want) in p.iter().zip([PHI - 1.0, 2.0 - PHI]) {
            c.close(*got, want, 1e-12, &format!("{name} probs from tau"));
        }
        let (_, total) = probs(&entry, name, "tau", "tau");
        c.close(total, 1.0, 1e-12, &format!("{name} total"));
    }

    let p1 = nonzero_sector_probs(&entry, "U_1_tau", "tau", "1");
    for (got, want) in p1.iter().zip([PHI.powi(-4), 1.0 - PHI.powi(-4)]) {
        c.close(*got, want, 1e-12, "U_1_tau probs from 1");
    }
    let pt = nonzero_sector_probs(&entry, "U_1_tau", "tau", "tau");
    for (got, want) in pt
        .iter()
        .zip([1.0 - PHI.powi(-1) - PHI.powi(-6), PHI.powi(-1), PHI.powi(-6)])
    {
        c.close(*got, want, 1e-12, "U_1_tau probs from tau");
    }
    for source in ["1", "tau"] {
        let (_, total) = probs(&entry, "U_1_tau", "tau", source);
        c.close(total, 1.0, 1e-12, &format!("U_1_tau total from {source}"));
    }
    c.finish();
}

#[test]
fn criterion_3_yang_lee_infeasibility() {
    let mut c = Criterion::new("ACCEPTANCE 3 (Yang-Lee infeasibility)");
    let entry = catalog::load("yang-lee").unwrap();
    let src = entry.tube.object_id("1").unwrap();
    let outcome =
        solve_channel_basis(&entry.tube, &entry.charges, "tau", src, Tolerance::abs(1e-12)).unwrap();
    match outcome {
        SolveOutcome::Feasible(_) => c.check("certificate returned", false),
        SolveOutcome::Infeasible(cert) => {
            c.check("unique affine solution", cert.affine_solution_unique);
            c.check("negative Gram eigenvalue", cert.min_eigenvalue < -0.5);
            // the forced Gram entries: |a|^2 = phi^2 on the unit target and
            // -1 on the tau target
            let unit_tgt = entry.tube.object_id("1").unwrap();
            let tau_tgt = entry.tube.object_id("tau").unwrap();
            let mut g_unit = f64::NAN;
            let mut g_tau = f64::NAN;
            for (tgt, tubes, g) in &cert.gram_blocks {
                if *tgt == unit_tgt && tubes.len() == 1 {
                    g_unit = g[(0, 0)].re;
                }
                if *tgt == tau_tgt && tubes.len() == 1 {
                    g_tau = g[(0, 0)].re;
                }
            }
            c.close(g_unit, PHI * PHI, 1e-12, "forced |a|^2 = phi^2");
            c.close(g_tau, -1.0, 1e-12, "forced Gram entry -1 on tau");
            // independent substitution: |a| = phi forces |a|^2 phi^2 = phi^4,
            // which already exceeds the total weight 1 available
            let lhs = g_unit * PHI * PHI;
            c.close(lhs, PHI.powi(4), 1e-12, "substitution |a|^2 phi^2 = phi^4");
            c.check("phi^4 > 1 contradiction", lhs > 1.0 + 1e-12);
        }
    }
    c.finish();
}

#[test]
fn criterion_4_tambara_yamagami() {
    let mut c = Criterion::new("ACCEPTANCE 4 (Tambara-Yamagami)");
    for (id, n) in [("ty:z2:chi1:+", 2usize), ("ty:z3:chi1:+", 3usize)] {
        let entry = catalog::load(id).unwrap();
        let expected = n * (n + 7) / 2;
        c.check(&format!("{id}: {expected} charges"), entry.charges.len() == expected);
        let chi = Bicharacter::standard_cyclic(n);
        // U_{x,y} isometries across the m defect
        for x in 0..n {
            for y in x + 1..n {
                let name = format!("U_{x}_{y}");
                let want_x = chi.get(x, y).conj();
                vec_close(
                    &mut c,
                    &stacked(&entry, &name, "m", &x.to_string()),
                    &[re(0.0), want_x],
                    1e-10,
                    &format!("{id} {name} (m)_{x}"),
                );
                vec_close(
                    &mut c,
                    &stacked(&entry, &name, "m", &y.to_string()),
                    &[re(1.0), re(0.0)],
                    1e-10,
                    &format!("{id} {name} (m)_{y}"),
                );
            }
        }
        // U_rho^Delta probabilities are uniform 1/|A|
        for u in entry.charges.iter().filter(|u| u.name.starts_with("U_rho")) {
            let (p, total) = probs(&entry, &u.name, "m", "m");
            c.check(&format!("{id} {}: {n} channels", u.name), p.len() == n);
            for got in &p {
                c.close(*got, 1.0 / n as f64, 1e-12, &format!("{id} {} uniform prob", u.name));
            }
            c.close(total, 1.0, 1e-12, &format!("{id} {} total", u.name));
        }
        // Kraus completeness of every m-defect basis
        for source in 0..entry.tube.objects.len() {
            if !entry
                .tube
                .basis
                .iter()
                .any(|b| b.source == source && b.defect == "m")
            {
                continue;
            }
            let basis = catalog::standard_channel_basis(&entry, "m", source).unwrap();
            let r = completeness_residual(&entry.tube, &basis).unwrap();
            c.check(
                &format!("{id} m-basis completeness out of {source} ({r:.3e})"),
                r <= 1e-9,
            );
        }
    }
    c.finish();
}

#[test]
fn criterion_5_invertible_cases() {
    let mut c = Criterion::new("ACCEPTANCE 5 (invertible symmetries)");
    let ids = [
        "pointed:s3:trivial",
        "pointed:z2:omega",
        "2group:z2z2-z2:trivial",
        "2group:z2z2-z2:coboundary",
    ];
    for id in ids {
        let entry = catalog::load(id).unwrap();
        let t = &entry.tube;
        let mut defects: Vec<String> = t.basis.iter().map(|b| b.defect.clone()).collect();
        defects.sort();
        defects.dedup();
        for defect in &defects {
            for source in 0..t.objects.len() {
                if !t.basis.iter().any(|b| b.source == source && &b.defect == defect) {
                    continue;
                }
                let basis = catalog::standard_channel_basis(&entry, defect, source).unwrap();
                for u in &entry.charges {
                    if u.sector_dims[source] == 0 {
                        continue;
                    }
                    let iso = assemble_isometry(t, u, &basis).unwrap();
                    let square = iso.stacked.rows == iso.stacked.cols;
                    let unitary = square && is_isometry(&iso.stacked, Tolerance::abs(1e-12)).unwrap();
                    c.check(&format!("{id} {} ({defect} from {source}) square unitary", u.name), unitary);
                    let r = transition_probabilities(t, u, &basis, None).unwrap();
                    c.close(r.total, 1.0, 1e-12, &format!("{id} {} total", u.name));
                    let pmax = r.entries.iter().map(|e| e.probability).fold(0.0, f64::max);
                    c.close(pmax, 1.0, 1e-12, &format!("{id} {} max prob", u.name));
                }
            }
        }
    }
    // kappa/epsilon phases: re-derive the charges from a second, independent
    // choice of orbit representatives and match them charge-for-charge
    for (id, reps) in [
        ("pointed:s3:trivial", vec![0usize, 2, 4]),
        ("2group:z2z2-z2:coboundary", vec![0usize, 2, 3]),
    ] {
        let base = catalog::load(id).unwrap();
        let alt = catalog::load_with_options(
            id,
            &CatalogOptions { orbit_reps: Some(reps.clone()), seed: 42 },
        )
        .unwrap();
        let mut matched = vec![false; base.charges.len()];
        for u in &alt.charges {
            let rep = verify_charge(&alt.tube, u, Tolerance::abs(1e-9)).unwrap();
            c.check(&format!("{id} alt-rep {} verifies", u.name), rep.pass);
            match identify(&alt.tube, u, &base.charges).unwrap() {
                Some(j) => {
                    c.check(&format!("{id} alt-rep {} duplicate match", u.name), !matched[j]);
                    matched[j] = true;
                }
                None => c.check(&format!("{id} alt-rep {} identified", u.name), false),
            }
        }
        c.check(&format!("{id} alt-rep bijection"), matched.iter().all(|&m| m));
    }
    c.finish();
}

#[test]
fn criterion_6_two_rep() {
    let mut c = Criterion::new("ACCEPTANCE 6 (2Rep((Z2xZ2)[1] x| Z2))");
    let entry = catalog::load("2rep-z2z2-z2").unwrap();
    c.check("5 charges", entry.charges.len() == 5);
    let sq: usize = entry.charges.iter().map(|u| u.total_dim().pow(2)).sum();
    c.check("sum of squared dims = 8", sq == entry.tube.total_dim() && sq == 8);
    vec_close(&mut c, &stacked(&entry, "U_1_gamma", "D", "1"), &[re(0.0), re(1.0)], 1e-12, "U_1_gamma (D)_1");
    vec_close(&mut c, &stacked(&entry, "U_1_gamma", "D", "gamma"), &[re(1.0), re(0.0)], 1e-12, "U_1_gamma (D)_gamma");
    let p = nonzero_sector_probs(&entry, "U_1_gamma", "D", "1");
    for (got, want) in p.iter().zip([0.0, 1.0]) {
        c.close(*got, want, 1e-12, "U_1_gamma probs from 1");
    }
    let p = nonzero_sector_probs(&entry, "U_1_gamma", "D", "gamma");
    for (got, want) in p.iter().zip([1.0, 0.0]) {
        c.close(*got, want, 1e-12, "U_1_gamma probs from gamma");
    }
    c.finish();
}

#[test]
fn criterion_7_property_suite() {
    let mut c = Criterion::new("ACCEPTANCE 7 (randomized property suite)");
    // pentagon residuals for every builtin with F-symbols
    for id in catalog::CATALOG_IDS {
        let entry = catalog::load(id).unwrap();
        if let Some(cat) = &entry.category {
            if cat.f_symbols.is_some() {
                let r = validate_pentagon(cat, Tolerance::abs(1e-9)).unwrap();
                c.check(&format!("{id} pentagon ({:.3e})", r.max_residual), r.max_residual < 1e-9);
            }
        }
    }
    // derived vs presented tube agreement
    for id in ["fib", "rep-s3"] {
        let entry = catalog::load(id).unwrap();
        let report =
            verify_against_reference(&entry.tube, entry.reference.as_ref().unwrap()).unwrap();
        c.check(&format!("{id} derived vs presented ({:.3e})", report.max_residual), report.max_residual <= 1e-10);
    }

    // 100 randomized (category, defect, source, charge, gauge, state) draws
    let pool: Vec<CatalogEntry> = catalog::CATALOG_IDS
        .iter()
        .filter(|id| **id != "yang-lee")
        .map(|id| catalog::load(id).unwrap())
        .collect();
    // every admissible (entry, defect, source, charge) combination
    let mut combos: Vec<(usize, String, usize, usize)> = vec![];
    for (ei, entry) in pool.iter().enumerate() {
        let mut pairs: Vec<(String, usize)> = entry
            .tube
            .basis
            .iter()
            .map(|b| (b.defect.clone(), b.source))
            .collect();
        pairs.sort();
        pairs.dedup();
        for (defect, source) in pairs {
            for (ci, u) in entry.charges.iter().enumerate() {
                if u.sector_dims[source] > 0 {
                    combos.push((ei, defect.clone(), source, ci));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let rand_c = |rng: &mut ChaCha8Rng| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    };
    for draw in 0..100 {
        let (ei, defect, source, ci) = combos[rng.gen_range(0..combos.len())].clone();
        let entry = &pool[ei];
        let t = &entry.tube;
        let u = &entry.charges[ci];
        let tag = format!("draw {draw} ({}, {defect}, src {source}, {})", entry.id, u.name);
        let basis = catalog::standard_channel_basis(entry, &defect, source).unwrap();
        let dx = u.sector_dims[source];
        let state: Vec<Complex64> = (0..dx).map(|_| rand_c(&mut rng)).collect();
        let state = if state.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-6 {
            state
        } else {
            vec![Complex64::new(1.0, 0.0); dx]
        };
        // random unitary gauge rotation on one target block
        let mut block_sizes: Vec<(usize, usize)> = vec![];
        for e in &basis.elements {
            match block_sizes.last_mut() {
                Some((tgt, m)) if *tgt == e.target => *m += 1,
                _ => block_sizes.push((e.target, 1)),
            }
        }
        let (tgt, m) = block_sizes[rng.gen_range(0..block_sizes.len())];
        let raw = ComplexMatrix::from_fn(m, m, |_, _| rand_c(&mut rng));
        let q = orthonormalize(&raw, Tolerance::abs(1e-9))
            .unwrap_or_else(|_| ComplexMatrix::identity(m));
        let mut rotations = HashMap::new();
        rotations.insert(tgt, q);
        let rotated = gauge_rotate(t, &basis, &rotations).unwrap();

        let r1 = transition_probabilities(t, u, &basis, Some(&state)).unwrap();
        let r2 = transition_probabilities(t, u, &rotated, Some(&state)).unwrap();
        c.check(&format!("{tag}: total 1 ({:.3e})", (r1.total - 1.0).abs()), (r1.total - 1.0).abs() <= 1e-9);
        c.check(&format!("{tag}: rotated total 1"), (r2.total - 1.0).abs() <= 1e-9);
        let m1 = r1.marginals(t.objects.len());
        let m2 = r2.marginals(t.objects.len());
        let dm = m1
            .iter()
            .zip(&m2)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        c.check(&format!("{tag}: gauge-invariant marginals ({dm:.3e})"), dm <= 1e-9);

        let rho = DensityMatrix::pure(source, &state).unwrap();
        let out = apply_channel(t, u, &basis, &rho).unwrap();
        let tr = total_trace(&out);
        c.check(
            &format!("{tag}: trace preserved ({:.3e})", (tr.re - 1.0).abs() + tr.im.abs()),
            (tr.re - 1.0).abs() <= 1e-9 && tr.im.abs() <= 1e-9,
        );
    }
    c.finish();
}
