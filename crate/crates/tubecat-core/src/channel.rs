//! Transition-channel bases, assembled isometries, induced quantum channels,
//! transition probabilities, and infeasibility certificates.

use crate::charges::GeneralisedCharge;
use crate::error::{Error, Result};
use crate::fusion::FusionCategoryData;
use crate::numerics::{self, ComplexMatrix, Tolerance};
use crate::tube::{TubeCategory, TubeMorphism};
use num_complex::Complex64;
use std::collections::HashMap;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One element of a transition-channel basis: a tube morphism source → target.
#[derive(Debug, Clone)]
pub struct ChannelElement {
    pub target: usize,
    pub morphism: TubeMorphism,
}

/// A complete family of channel morphisms out of one object for one defect,
/// ordered by (target object, channel index).
#[derive(Debug, Clone)]
pub struct ChannelBasis {
    pub source: usize,
    pub defect: String,
    pub elements: Vec<ChannelElement>,
}

/// The Kraus operators of the channel induced by a charge on a channel basis.
#[derive(Debug, Clone)]
pub struct ChannelIsometry {
    pub source: usize,
    /// (target object, K_i) per channel element, in basis order.
    pub kraus: Vec<(usize, ComplexMatrix)>,
    /// vertical concatenation of the Kraus operators
    pub stacked: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub object: usize,
    pub matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn pure(object: usize, state: &[Complex64]) -> Result<DensityMatrix> {
        let norm2: f64 = state.iter().map(|c| c.norm_sqr()).sum();
        if norm2 <= 0.0 {
            return Err(Error::ZeroState);
        }
        let d = state.len();
        let matrix = ComplexMatrix::from_fn(d, d, |i, j| state[i] * state[j].conj() / norm2);
        Ok(DensityMatrix { object, matrix })
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }
}

#[derive(Debug, Clone)]
pub struct ProbabilityEntry {
    pub target: usize,
    /// position of this channel among those sharing the same target
    pub index_within_target: usize,
    pub probability: f64,
}

#[derive(Debug, Clone)]
pub struct ProbabilityReport {
    pub charge: String,
    pub defect: String,
    pub source: usize,
    pub entries: Vec<ProbabilityEntry>,
    pub total: f64,
}

impl ProbabilityReport {
    /// Probability of ending in each target object (gauge invariant).
    pub fn marginals(&self, n_objects: usize) -> Vec<f64> {
        let mut out = vec![0.0; n_objects];
        for e in &self.entries {
            out[e.target] += e.probability;
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Canonical channel basis (closed form, unitary categories with F-symbols)
// ---------------------------------------------------------------------------

/// The closed-form complete channel basis for a simple defect acting out of a
/// simple object, in the weighted tube basis. Requires F-symbols and unitarity.
pub fn canonical_channel_basis(
    cat: &FusionCategoryData,
    t: &TubeCategory,
    defect: usize,
    source: usize,
) -> Result<ChannelBasis> {
    if cat.f_symbols.is_none() {
        return Err(Error::MissingFSymbols(cat.name.clone()));
    }
    if !cat.unitary_flag {
        return Err(Error::NonUnitaryCategory);
    }
    let defect_name = cat.simples[defect].display_name.clone();
    if defect == 0 {
        // unit defect: the identity morphism alone is complete
        return Ok(ChannelBasis {
            source,
            defect: defect_name,
            elements: vec![ChannelElement {
                target: source,
                morphism: t.identity(source),
            }],
        });
    }
    let abar = cat.dual(defect);
    let w = &cat.basis_weights;
    let mut elements = vec![];
    for (i, b) in t.basis.iter().enumerate() {
        if b.source != source || b.defect_id != Some(defect) {
            continue;
        }
        let s = b.target;
        let k = b.channel_id.expect("derived tube has channel ids");
        let coeff = cat.f_inv(k, abar, defect, k, 0, s) * w[defect] * w[defect]
            / (w[s] * w[k] * w[k]);
        elements.push(ChannelElement {
            target: s,
            morphism: TubeMorphism::scaled(i, coeff),
        });
    }
    Ok(ChannelBasis { source, defect: defect_name, elements })
}

/// Residual of the Kraus completeness relation Σ_i e_i† ∘ e_i = id at tube
/// level (requires a dagger on the tube category).
pub fn completeness_residual(t: &TubeCategory, basis: &ChannelBasis) -> Result<f64> {
    let mut acc = TubeMorphism::default();
    for e in &basis.elements {
        let d = t.dagger(&e.morphism)?;
        let p = t.compose(&d, &e.morphism)?;
        for (&i, &c) in &p.terms {
            acc.add_term(i, c);
        }
    }
    Ok(acc.max_diff(&t.identity(basis.source)))
}

// ---------------------------------------------------------------------------
// Isometries, channels, probabilities
// ---------------------------------------------------------------------------

/// Evaluate a charge on every element of a channel basis and stack the
/// resulting Kraus operators into one isometry candidate.
pub fn assemble_isometry(
    t: &TubeCategory,
    u: &GeneralisedCharge,
    basis: &ChannelBasis,
) -> Result<ChannelIsometry> {
    let dx = u.sector_dims[basis.source];
    let mut kraus = vec![];
    let mut total_rows = 0;
    for e in &basis.elements {
        let k = u.action_of_morphism(t, &e.morphism, basis.source, e.target);
        total_rows += k.rows;
        kraus.push((e.target, k));
    }
    let mut stacked = ComplexMatrix::zeros(total_rows, dx);
    let mut r0 = 0;
    for (_, k) in &kraus {
        for i in 0..k.rows {
            for j in 0..dx {
                stacked[(r0 + i, j)] = k[(i, j)];
            }
        }
        r0 += k.rows;
    }
    Ok(ChannelIsometry { source: basis.source, kraus, stacked })
}

/// Transition probabilities of a charge across a channel basis, starting from
/// `state` in the source sector (defaults to the first basis vector e_0).
pub fn transition_probabilities(
    t: &TubeCategory,
    u: &GeneralisedCharge,
    basis: &ChannelBasis,
    state: Option<&[Complex64]>,
) -> Result<ProbabilityReport> {
    let dx = u.sector_dims[basis.source];
    if dx == 0 {
        return Err(Error::SectorMismatch);
    }
    let mut default_state = vec![ZERO; dx];
    default_state[0] = Complex64::new(1.0, 0.0);
    let psi_raw = state.unwrap_or(&default_state);
    if psi_raw.len() != dx {
        return Err(Error::SectorMismatch);
    }
    let norm2: f64 = psi_raw.iter().map(|c| c.norm_sqr()).sum();
    if norm2 <= 0.0 {
        return Err(Error::ZeroState);
    }
    let psi: Vec<Complex64> = psi_raw.iter().map(|c| c / norm2.sqrt()).collect();
    let iso = assemble_isometry(t, u, basis)?;
    let mut entries = vec![];
    let mut per_target: HashMap<usize, usize> = HashMap::new();
    let mut total = 0.0;
    for (target, k) in &iso.kraus {
        let mut p = 0.0;
        for i in 0..k.rows {
            let amp: Complex64 = (0..k.cols).map(|j| k[(i, j)] * psi[j]).sum();
            p += amp.norm_sqr();
        }
        let slot = per_target.entry(*target).or_insert(0);
        entries.push(ProbabilityEntry {
            target: *target,
            index_within_target: *slot,
            probability: p,
        });
        *slot += 1;
        total += p;
    }
    Ok(ProbabilityReport {
        charge: u.name.clone(),
        defect: basis.defect.clone(),
        source: basis.source,
        entries,
        total,
    })
}

/// Apply the induced channel ρ ↦ Σ_i K_i ρ K_i† to a density matrix,
/// returning one (possibly zero) output block per object.
pub fn apply_channel(
    t: &TubeCategory,
    u: &GeneralisedCharge,
    basis: &ChannelBasis,
    rho: &DensityMatrix,
) -> Result<Vec<DensityMatrix>> {
    if rho.object != basis.source {
        return Err(Error::SectorMismatch);
    }
    let dx = u.sector_dims[basis.source];
    if rho.matrix.rows != dx || rho.matrix.cols != dx {
        return Err(Error::SectorMismatch);
    }
    let iso = assemble_isometry(t, u, basis)?;
    let mut out: Vec<DensityMatrix> = (0..u.sector_dims.len())
        .map(|x| DensityMatrix {
            object: x,
            matrix: ComplexMatrix::zeros(u.sector_dims[x], u.sector_dims[x]),
        })
        .collect();
    for (target, k) in &iso.kraus {
        let term = k
            .mul(&rho.matrix)?
            .mul(&numerics::conjugate_transpose(k))?;
        out[*target].matrix = out[*target].matrix.add(&term)?;
    }
    Ok(out)
}

pub fn total_trace(blocks: &[DensityMatrix]) -> Complex64 {
    blocks.iter().map(|b| b.trace()).sum()
}

/// Rotate the channel elements within each target block by a unitary matrix.
/// Target-marginal probabilities are invariant under such rotations.
pub fn gauge_rotate(
    t: &TubeCategory,
    basis: &ChannelBasis,
    rotations: &HashMap<usize, ComplexMatrix>,
) -> Result<ChannelBasis> {
    let _ = t;
    let mut by_target: Vec<usize> = basis.elements.iter().map(|e| e.target).collect();
    by_target.dedup();
    let mut elements: Vec<ChannelElement> = vec![];
    let mut idx = 0;
    for &target in &by_target {
        let group: Vec<&ChannelElement> = basis.elements[idx..]
            .iter()
            .take_while(|e| e.target == target)
            .collect();
        let m = group.len();
        idx += m;
        match rotations.get(&target) {
            None => elements.extend(group.iter().map(|e| (*e).clone())),
            Some(wmat) => {
                if wmat.rows != m || wmat.cols != m {
                    return Err(Error::Shape(format!(
                        "rotation for target {target} has shape {}x{}, expected {m}x{m}",
                        wmat.rows, wmat.cols
                    )));
                }
                if !numerics::is_isometry(wmat, Tolerance::abs(1e-9))? {
                    return Err(Error::NotUnitary);
                }
                for j in 0..m {
                    let mut morphism = TubeMorphism::default();
                    for (i, e) in group.iter().enumerate() {
                        for (&b, &c) in &e.morphism.terms {
                            morphism.add_term(b, wmat[(j, i)] * c);
                        }
                    }
                    elements.push(ChannelElement { target, morphism });
                }
            }
        }
    }
    Ok(ChannelBasis {
        source: basis.source,
        defect: basis.defect.clone(),
        elements,
    })
}

// ---------------------------------------------------------------------------
// Completeness solver and infeasibility certificates
// ---------------------------------------------------------------------------

/// Witness that no complete channel basis exists: the affine completeness
/// constraints force a Gram block with a negative eigenvalue.
#[derive(Debug, Clone)]
pub struct InfeasibilityCertificate {
    pub defect: String,
    pub source: usize,
    /// (target object, channel tube-basis indices, Hermitian Gram block)
    pub gram_blocks: Vec<(usize, Vec<usize>, ComplexMatrix)>,
    /// residual of the affine completeness system at the exhibited point
    pub affine_residual: f64,
    pub min_eigenvalue: f64,
    pub witness_target: usize,
    pub witness: Vec<Complex64>,
    /// v† G v for the witness vector (negative)
    pub witness_quadratic_form: f64,
    /// true when the affine solution is unique, so the negative eigenvalue is
    /// unavoidable; false when reported after a stalled projection search
    pub affine_solution_unique: bool,
}

#[derive(Debug, Clone)]
pub enum SolveOutcome {
    Feasible(ChannelBasis),
    Infeasible(Box<InfeasibilityCertificate>),
}

struct GramParam {
    block: usize,
    a: usize,
    b: usize,
    imag: bool,
}

fn rebuild_blocks(blocks: &[(usize, Vec<usize>)], params: &[GramParam], x: &[f64]) -> Vec<ComplexMatrix> {
    let mut gs: Vec<ComplexMatrix> = blocks
        .iter()
        .map(|(_, ch)| ComplexMatrix::zeros(ch.len(), ch.len()))
        .collect();
    for (pi, p) in params.iter().enumerate() {
        let g = &mut gs[p.block];
        if p.imag {
            g[(p.b, p.a)] += Complex64::new(0.0, x[pi]);
            g[(p.a, p.b)] -= Complex64::new(0.0, x[pi]);
        } else {
            g[(p.b, p.a)] += Complex64::new(x[pi], 0.0);
            if p.a != p.b {
                g[(p.a, p.b)] += Complex64::new(x[pi], 0.0);
            }
        }
    }
    gs
}

fn extract_params(blocks: &[(usize, Vec<usize>)], params: &[GramParam], gs: &[ComplexMatrix]) -> Vec<f64> {
    let _ = blocks;
    params
        .iter()
        .map(|p| {
            let g = &gs[p.block];
            if p.imag {
                g[(p.b, p.a)].im
            } else {
                g[(p.b, p.a)].re
            }
        })
        .collect()
}

fn psd_project(gs: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    gs.iter()
        .map(|g| {
            if g.rows == 0 {
                return Ok(g.clone());
            }
            let (vals, vecs) = numerics::hermitian_eigenbasis(g, Tolerance::abs(1e-6))?;
            let d = g.rows;
            Ok(ComplexMatrix::from_fn(d, d, |i, j| {
                (0..d)
                    .map(|k| vecs[(i, k)] * vals[k].max(0.0) * vecs[(j, k)].conj())
                    .sum()
            }))
        })
        .collect()
}

fn min_eig(gs: &[ComplexMatrix]) -> Result<(f64, usize, Vec<Complex64>)> {
    let mut best = (f64::INFINITY, 0usize, vec![]);
    for (bi, g) in gs.iter().enumerate() {
        if g.rows == 0 {
            continue;
        }
        let (vals, vecs) = numerics::hermitian_eigenbasis(g, Tolerance::abs(1e-6))?;
        if vals[0] < best.0 {
            best = (vals[0], bi, (0..g.rows).map(|i| vecs[(i, 0)]).collect());
        }
    }
    Ok(best)
}

/// Search for a complete channel basis for `defect` out of `source` by solving
/// the per-charge completeness constraints
/// Σ_S Σ_{a,b} G^S_{ba} · U(t_a)† U(t_b) = Id over every charge `U` in
/// `charges`, with one Hermitian Gram block G^S per target object. A PSD
/// solution factors into channel morphisms; a provably non-PSD affine set
/// yields an infeasibility certificate.
pub fn solve_channel_basis(
    t: &TubeCategory,
    charges: &[GeneralisedCharge],
    defect: &str,
    source: usize,
    tol: Tolerance,
) -> Result<SolveOutcome> {
    // enumerate channel tube morphisms, grouped by target
    let mut blocks: Vec<(usize, Vec<usize>)> = vec![];
    for (i, b) in t.basis.iter().enumerate() {
        if b.source != source || b.defect != defect {
            continue;
        }
        match blocks.last_mut() {
            Some((tgt, ch)) if *tgt == b.target => ch.push(i),
            _ => blocks.push((b.target, vec![i])),
        }
    }
    if blocks.is_empty() {
        return Err(Error::UnknownLabel(format!(
            "no tube morphisms with defect '{defect}' out of object {source}"
        )));
    }
    let mut params: Vec<GramParam> = vec![];
    for (bi, (_, ch)) in blocks.iter().enumerate() {
        for a in 0..ch.len() {
            for b in a..ch.len() {
                params.push(GramParam { block: bi, a, b, imag: false });
                if a != b {
                    params.push(GramParam { block: bi, a, b, imag: true });
                }
            }
        }
    }
    // assemble the real affine system
    let mut mat: Vec<Vec<f64>> = vec![];
    let mut rhs: Vec<f64> = vec![];
    for u in charges {
        let dx = u.sector_dims[source];
        if dx == 0 {
            continue;
        }
        // T(a,b) = U(t_a)† U(t_b), cached per block pair
        let mut rows: Vec<Vec<Complex64>> = vec![vec![ZERO; params.len()]; dx * dx];
        for (pi, p) in params.iter().enumerate() {
            let ch = &blocks[p.block].1;
            let ua = u.action_of(t, ch[p.a]);
            let ub = u.action_of(t, ch[p.b]);
            let tab = numerics::conjugate_transpose(&ua).mul(&ub).unwrap();
            let tba = numerics::conjugate_transpose(&ub).mul(&ua).unwrap();
            for r in 0..dx {
                for c2 in 0..dx {
                    let e = r * dx + c2;
                    if p.imag {
                        rows[e][pi] = Complex64::new(0.0, 1.0) * (tab[(r, c2)] - tba[(r, c2)]);
                    } else if p.a == p.b {
                        rows[e][pi] = tab[(r, c2)];
                    } else {
                        rows[e][pi] = tab[(r, c2)] + tba[(r, c2)];
                    }
                }
            }
        }
        for r in 0..dx {
            for c2 in 0..dx {
                let e = r * dx + c2;
                let target = if r == c2 { 1.0 } else { 0.0 };
                mat.push(rows[e].iter().map(|z| z.re).collect());
                rhs.push(target);
                mat.push(rows[e].iter().map(|z| z.im).collect());
                rhs.push(0.0);
            }
        }
    }
    if mat.is_empty() {
        return Err(Error::Validation(
            "no charge in the family has support on the source object".into(),
        ));
    }
    let cutoff = 1e-10;
    let (mut x, affine_res) = numerics::lstsq_real(&mat, &rhs, cutoff);
    if affine_res > 1e-7 {
        return Err(Error::Validation(format!(
            "completeness constraints are inconsistent (residual {affine_res:.3e})"
        )));
    }
    let rank = {
        let rows = mat.len();
        let cols = params.len();
        nalgebra::DMatrix::from_fn(rows, cols, |i, j| mat[i][j]).rank(1e-9)
    };
    let unique = rank == params.len();
    let psd_floor = -1e-9;
    let mut gs = rebuild_blocks(&blocks, &params, &x);
    let (mut lo, mut wb, mut wv) = min_eig(&gs)?;
    if lo < psd_floor && !unique {
        // alternating projection between the affine set and the PSD cone
        let mut stalled = true;
        for _ in 0..10_000 {
            let proj = psd_project(&gs)?;
            let xp = extract_params(&blocks, &params, &proj);
            x = numerics::project_affine(&mat, &rhs, &xp, cutoff);
            gs = rebuild_blocks(&blocks, &params, &x);
            let dist: f64 = x
                .iter()
                .zip(&xp)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            let m = min_eig(&gs)?;
            lo = m.0;
            wb = m.1;
            wv = m.2;
            if dist < tol.abs_eps && lo >= psd_floor {
                stalled = false;
                break;
            }
        }
        if stalled && lo < psd_floor {
            // fall through to the certificate branch below
        }
    }
    if lo < psd_floor {
        let g = &gs[wb];
        let mut q = ZERO;
        for i in 0..g.rows {
            for j in 0..g.cols {
                q += wv[i].conj() * g[(i, j)] * wv[j];
            }
        }
        let resid = {
            let rows = mat.len();
            let mut worst = 0.0f64;
            for r in 0..rows {
                let v: f64 = mat[r].iter().zip(&x).map(|(a, b)| a * b).sum();
                worst = worst.max((v - rhs[r]).abs());
            }
            worst
        };
        return Ok(SolveOutcome::Infeasible(Box::new(InfeasibilityCertificate {
            defect: defect.to_string(),
            source,
            gram_blocks: blocks
                .iter()
                .zip(&gs)
                .map(|((tgt, ch), g)| (*tgt, ch.clone(), g.clone()))
                .collect(),
            affine_residual: resid,
            min_eigenvalue: lo,
            witness_target: blocks[wb].0,
            witness: wv,
            witness_quadratic_form: q.re,
            affine_solution_unique: unique,
        })));
    }
    // factor each Gram block: G = C† C, channels are rows of C
    let mut elements = vec![];
    for ((target, ch), g) in blocks.iter().zip(&gs) {
        let (vals, vecs) = numerics::hermitian_eigenbasis(g, Tolerance::abs(1e-6))?;
        let scale = vals.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
        for k in 0..g.rows {
            if vals[k] < 1e-10 * scale {
                continue;
            }
            let sq = vals[k].max(0.0).sqrt();
            let mut morphism = TubeMorphism::default();
            for (a, &bi) in ch.iter().enumerate() {
                morphism.add_term(bi, sq * vecs[(a, k)].conj());
            }
            elements.push(ChannelElement { target: *target, morphism });
        }
    }
    Ok(SolveOutcome::Feasible(ChannelBasis {
        source,
        defect: defect.to_string(),
        elements,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charges::{decompose_irreps, verify_charge};
    use crate::fusion::*;
    use crate::tube::derive_tube;

    const PHI: f64 = 1.618033988749894848204586834365638118;

    #[test]
    fn canonical_basis_fib() {
        let cat = build_fib();
        let t = derive_tube(&cat).unwrap();
        // defect τ out of 1: {φ^{-1}·t[1→1;τ], φ^{-1}·t[1→τ;τ]}
        let b = canonical_channel_basis(&cat, &t, 1, 0).unwrap();
        assert_eq!(b.elements.len(), 2);
        assert_eq!(b.elements[0].target, 0);
        assert_eq!(b.elements[1].target, 1);
        let i11 = t.find(0, 0, "tau", "tau").unwrap();
        let i1t = t.find(0, 1, "tau", "tau").unwrap();
        let inv_phi = Complex64::new(1.0 / PHI, 0.0);
        assert!((b.elements[0].morphism.terms[&i11] - inv_phi).norm() < 1e-12);
        assert!((b.elements[1].morphism.terms[&i1t] - inv_phi).norm() < 1e-12);
        assert!(completeness_residual(&t, &b).unwrap() < 1e-12);
        // defect τ out of τ: {φ^{1/2}t[ττ;τ;1] + ..., φ^{-1}...}; just check completeness
        let b2 = canonical_channel_basis(&cat, &t, 1, 1).unwrap();
        assert!(completeness_residual(&t, &b2).unwrap() < 1e-12);
        // unit defect
        let b0 = canonical_channel_basis(&cat, &t, 0, 1).unwrap();
        assert_eq!(b0.elements.len(), 1);
        assert!(completeness_residual(&t, &b0).unwrap() < 1e-12);
    }

    #[test]
    fn canonical_basis_complete_everywhere() {
        for cat in [
            build_fib(),
            build_rep_s3(),
            build_ty(
                &FiniteGroupTable::cyclic(2),
                &Bicharacter::standard_cyclic(2),
                1.0 / 2f64.sqrt(),
            )
            .unwrap(),
        ] {
            let t = derive_tube(&cat).unwrap();
            for a in 0..cat.n_simples() {
                for x in 0..cat.n_simples() {
                    let b = canonical_channel_basis(&cat, &t, a, x).unwrap();
                    let res = completeness_residual(&t, &b).unwrap();
                    assert!(res < 1e-12, "{} A={a} X={x}: residual {res:.3e}", cat.name);
                }
            }
        }
    }

    #[test]
    fn canonical_basis_rejects_nonunitary() {
        let cat = build_yang_lee();
        let t = derive_tube(&cat).unwrap();
        assert!(matches!(
            canonical_channel_basis(&cat, &t, 1, 0),
            Err(Error::NonUnitaryCategory)
        ));
    }

    #[test]
    fn isometries_and_probabilities_fib() {
        let cat = build_fib();
        let t = derive_tube(&cat).unwrap();
        let irreps = decompose_irreps(&t, Tolerance::default()).unwrap();
        let b = canonical_channel_basis(&cat, &t, 1, 1).unwrap();
        for u in &irreps {
            if u.sector_dims[1] == 0 {
                continue;
            }
            let iso = assemble_isometry(&t, u, &b).unwrap();
            assert!(numerics::is_isometry(&iso.stacked, Tolerance::abs(1e-10)).unwrap());
            let report = transition_probabilities(&t, u, &b, None).unwrap();
            assert!((report.total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn channel_preserves_trace() {
        let cat = build_rep_s3();
        let t = derive_tube(&cat).unwrap();
        let irreps = decompose_irreps(&t, Tolerance::default()).unwrap();
        let b = canonical_channel_basis(&cat, &t, 2, 2).unwrap();
        let u = irreps.iter().find(|u| u.sector_dims[2] >= 1).unwrap();
        let dx = u.sector_dims[2];
        let state: Vec<Complex64> = (0..dx)
            .map(|i| Complex64::new(1.0 + i as f64, 0.5 * i as f64))
            .collect();
        let rho = DensityMatrix::pure(2, &state).unwrap();
        let out = apply_channel(&t, u, &b, &rho).unwrap();
        assert!((total_trace(&out) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gauge_rotation_preserves_marginals() {
        let cat = build_rep_s3();
        let t = derive_tube(&cat).unwrap();
        let irreps = decompose_irreps(&t, Tolerance::default()).unwrap();
        let b = canonical_channel_basis(&cat, &t, 2, 2).unwrap();
        // mix the first two channels of a multi-channel block by a unitary
        let mut counts = HashMap::new();
        for e in &b.elements {
            *counts.entry(e.target).or_insert(0usize) += 1;
        }
        let (&tgt2, &m) = counts.iter().find(|(_, &c)| c >= 2).unwrap();
        let theta = 0.7f64;
        let w = ComplexMatrix::from_fn(m, m, |i, j| match (i, j) {
            (0, 0) | (1, 1) => Complex64::new(theta.cos(), 0.0),
            (0, 1) | (1, 0) => Complex64::new(0.0, theta.sin()),
            _ if i == j => Complex64::new(1.0, 0.0),
            _ => ZERO,
        });
        let mut rot = HashMap::new();
        rot.insert(tgt2, w);
        let b2 = gauge_rotate(&t, &b, &rot).unwrap();
        assert!(completeness_residual(&t, &b2).unwrap() < 1e-10);
        for u in &irreps {
            if u.sector_dims[2] == 0 {
                continue;
            }
            let r1 = transition_probabilities(&t, u, &b, None).unwrap();
            let r2 = transition_probabilities(&t, u, &b2, None).unwrap();
            let m1 = r1.marginals(t.objects.len());
            let m2 = r2.marginals(t.objects.len());
            for (a, bv) in m1.iter().zip(&m2) {
                assert!((a - bv).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn solver_feasible_fib() {
        let cat = build_fib();
        let t = derive_tube(&cat).unwrap();
        let irreps = decompose_irreps(&t, Tolerance::default()).unwrap();
        for u in &irreps {
            assert!(verify_charge(&t, u, Tolerance::abs(1e-8)).unwrap().pass);
        }
        for x in [0usize, 1] {
            let out = solve_channel_basis(&t, &irreps, "tau", x, Tolerance::abs(1e-9)).unwrap();
            match out {
                SolveOutcome::Feasible(b) => {
                    assert!(completeness_residual(&t, &b).unwrap() < 1e-8);
                }
                SolveOutcome::Infeasible(_) => panic!("Fib must be feasible"),
            }
        }
    }

    #[test]
    fn solver_certifies_yang_lee() {
        let cat = build_yang_lee();
        let t = derive_tube(&cat).unwrap();
        // No positive dagger, so the decomposition path is unavailable; build
        // the two charges with support on the unit object by hand.
        let i_t11 = t.find(0, 0, "tau", "tau").unwrap();
        let i_ttt1 = t.find(1, 1, "tau", "1").unwrap();
        let i_tttt = t.find(1, 1, "tau", "tau").unwrap();
        let i_t1t = t.find(0, 1, "tau", "tau").unwrap();
        let i_tt1 = t.find(1, 0, "tau", "tau").unwrap();
        let one = |z: Complex64| ComplexMatrix::from_fn(1, 1, |_, _| z);
        // U_1: H_1 = C, H_τ = 0, t[1→1;τ] → −1/φ
        let mut action = HashMap::new();
        action.insert(i_t11, one(Complex64::new(-1.0 / PHI, 0.0)));
        action.insert(t.identity_index[0], ComplexMatrix::identity(1));
        let u1 = GeneralisedCharge {
            name: "U1".into(),
            sector_dims: vec![1, 0],
            action,
            dagger_compatible: false,
        };
        // U_{1,τ}: H_1 = H_τ = C
        let mut action = HashMap::new();
        action.insert(i_t11, one(Complex64::new(PHI, 0.0)));
        action.insert(i_ttt1, one(Complex64::new(-PHI, 0.0)));
        action.insert(i_tttt, one(Complex64::new(PHI * PHI, 0.0)));
        action.insert(i_t1t, one(Complex64::new(PHI.sqrt(), PHI.sqrt() * PHI)));
        action.insert(i_tt1, one(Complex64::new(1.0 / PHI.sqrt(), -PHI / PHI.sqrt())));
        action.insert(t.identity_index[0], ComplexMatrix::identity(1));
        action.insert(t.identity_index[1], ComplexMatrix::identity(1));
        let u1t = GeneralisedCharge {
            name: "U1tau".into(),
            sector_dims: vec![1, 1],
            action,
            dagger_compatible: false,
        };
        for u in [&u1, &u1t] {
            let rep = verify_charge(&t, u, Tolerance::abs(1e-9)).unwrap();
            assert!(rep.pass, "{}: {:?}", u.name, rep.messages.first());
        }
        let out =
            solve_channel_basis(&t, &[u1, u1t], "tau", 0, Tolerance::abs(1e-9)).unwrap();
        match out {
            SolveOutcome::Infeasible(c) => {
                assert!(c.affine_solution_unique);
                assert!(c.min_eigenvalue < -0.5);
                // blocks: target 1 has channel t[1→1;τ] with g1 = φ²,
                // target τ has t[1→τ;τ] with g2 = −1
                let g_unit = &c.gram_blocks.iter().find(|(t2, _, _)| *t2 == 0).unwrap().2;
                let g_tau = &c.gram_blocks.iter().find(|(t2, _, _)| *t2 == 1).unwrap().2;
                assert!((g_unit[(0, 0)].re - PHI * PHI).abs() < 1e-9);
                assert!((g_tau[(0, 0)].re + 1.0).abs() < 1e-9);
            }
            SolveOutcome::Feasible(_) => panic!("Yang-Lee must be infeasible"),
        }
    }
}
