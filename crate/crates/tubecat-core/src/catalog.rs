//! Builtin catalog: named tube categories bundled with reference tables and
//! complete families of generalised charges.

use crate::charges::{decompose_irreps_seeded, GeneralisedCharge};
use crate::channel::{canonical_channel_basis, ChannelBasis, ChannelElement};
use crate::error::{Error, Result};
use crate::fusion::{
    build_fib, build_pointed, build_rep_s3, build_ty, build_yang_lee, Bicharacter, Cocycle3,
    FiniteGroupTable, FusionCategoryData,
};
use crate::numerics::{ComplexMatrix, Tolerance};
use crate::tube::{
    derive_tube, presented_tube, ComposeEntry, DaggerEntry, PresentedBasis, Term, TubeCategory,
    TubeMorphism, TubePresentation,
};
use num_complex::Complex64;
use std::collections::HashMap;

pub const PHI: f64 = 1.618033988749894848204586834365638118;
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub const CATALOG_IDS: [&str; 13] = [
    "fib",
    "yang-lee",
    "rep-s3",
    "ty:z2:chi1:+",
    "ty:z2:chi1:-",
    "ty:z3:chi1:+",
    "ty:z3:chi1:-",
    "pointed:z2:trivial",
    "pointed:z2:omega",
    "pointed:s3:trivial",
    "2group:z2z2-z2:trivial",
    "2group:z2z2-z2:coboundary",
    "2rep-z2z2-z2",
];

/// One catalog entry: the tube category, optional underlying fusion-category
/// data, an optional independent reference presentation, and its charges.
pub struct CatalogEntry {
    pub id: String,
    pub category: Option<FusionCategoryData>,
    pub tube: TubeCategory,
    pub reference: Option<TubePresentation>,
    pub charges: Vec<GeneralisedCharge>,
}

#[derive(Debug, Clone, Default)]
pub struct CatalogOptions {
    /// Override the orbit representatives used for pointed/2-group charge
    /// construction (object indices, one per orbit, any order).
    pub orbit_reps: Option<Vec<usize>>,
    pub seed: u64,
}

pub fn load(id: &str) -> Result<CatalogEntry> {
    load_with_options(id, &CatalogOptions { orbit_reps: None, seed: 42 })
}

pub fn load_with_options(id: &str, opts: &CatalogOptions) -> Result<CatalogEntry> {
    match id {
        "fib" => {
            let cat = build_fib();
            let tube = derive_tube(&cat)?;
            let charges = fib_charges(&tube)?;
            Ok(CatalogEntry {
                id: id.into(),
                category: Some(cat),
                reference: Some(reference_presentation("fib")?),
                tube,
                charges,
            })
        }
        "yang-lee" => {
            let cat = build_yang_lee();
            let tube = derive_tube(&cat)?;
            let charges = yang_lee_charges(&tube)?;
            Ok(CatalogEntry {
                id: id.into(),
                category: Some(cat),
                reference: Some(reference_presentation("yang-lee")?),
                tube,
                charges,
            })
        }
        "rep-s3" => {
            let cat = build_rep_s3();
            let tube = derive_tube(&cat)?;
            let charges = rep_s3_charges(&tube)?;
            Ok(CatalogEntry {
                id: id.into(),
                category: Some(cat),
                reference: Some(reference_presentation("rep-s3")?),
                tube,
                charges,
            })
        }
        _ if id.starts_with("ty:") => load_ty(id),
        _ if id.starts_with("pointed:") => load_pointed(id, opts),
        _ if id.starts_with("2group:") => load_two_group(id, opts),
        "2rep-z2z2-z2" => load_two_rep(id),
        _ => Err(Error::UnknownCategory(id.into())),
    }
}

// ---------------------------------------------------------------------------
// Bundled reference data
// ---------------------------------------------------------------------------

fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "fib" => Some(include_str!("../data/fib.json")),
        "yang-lee" => Some(include_str!("../data/yang-lee.json")),
        "rep-s3" => Some(include_str!("../data/rep-s3.json")),
        "2rep-z2z2-z2" => Some(include_str!("../data/2rep-z2z2-z2.json")),
        _ => None,
    }
}

/// Load a reference presentation, preferring `$TUBEALG_DATA/<name>.json` over
/// the bundled copy.
pub fn reference_presentation(name: &str) -> Result<TubePresentation> {
    if let Ok(dir) = std::env::var("TUBEALG_DATA") {
        let path = std::path::Path::new(&dir).join(format!("{name}.json"));
        if path.exists() {
            let text = std::fs::read_to_string(path)?;
            return Ok(serde_json::from_str(&text)?);
        }
    }
    let text = bundled(name)
        .ok_or_else(|| Error::Schema(format!("no bundled reference data '{name}'")))?;
    Ok(serde_json::from_str(text)?)
}

// ---------------------------------------------------------------------------
// Hardcoded charge families
// ---------------------------------------------------------------------------

fn one_by_one(z: Complex64) -> ComplexMatrix {
    ComplexMatrix::from_fn(1, 1, |_, _| z)
}

struct ChargeBuilder<'a> {
    t: &'a TubeCategory,
    sector_dims: Vec<usize>,
    action: HashMap<usize, ComplexMatrix>,
}

impl<'a> ChargeBuilder<'a> {
    fn new(t: &'a TubeCategory, sector_dims: Vec<usize>) -> Self {
        let mut action = HashMap::new();
        for (x, &idx) in t.identity_index.iter().enumerate() {
            if sector_dims[x] > 0 {
                action.insert(idx, ComplexMatrix::identity(sector_dims[x]));
            }
        }
        ChargeBuilder { t, sector_dims, action }
    }

    fn set(&mut self, src: usize, tgt: usize, defect: &str, channel: &str, z: Complex64) -> Result<()> {
        let i = self.t.find(src, tgt, defect, channel).ok_or_else(|| {
            Error::UnknownLabel(format!("tube [{src}->{tgt}; {defect}; {channel}]"))
        })?;
        self.action.insert(i, one_by_one(z));
        Ok(())
    }

    fn build(self, name: &str, dagger_compatible: bool) -> GeneralisedCharge {
        GeneralisedCharge {
            name: name.into(),
            sector_dims: self.sector_dims,
            action: self.action,
            dagger_compatible,
        }
    }
}

fn fib_charges(t: &TubeCategory) -> Result<Vec<GeneralisedCharge>> {
    let re = |v: f64| Complex64::new(v, 0.0);
    let mut out = vec![];
    let mut b = ChargeBuilder::new(t, vec![1, 0]);
    b.set(0, 0, "tau", "tau", re(PHI))?;
    out.push(b.build("U_1", true));
    let disc = (0.75 - 1.0 / PHI).sqrt();
    for (sign, name) in [(1.0, "U_tau_+"), (-1.0, "U_tau_-")] {
        let x = Complex64::new(-0.5, sign * disc);
        let mut b = ChargeBuilder::new(t, vec![0, 1]);
        b.set(1, 1, "tau", "1", x)?;
        b.set(1, 1, "tau", "tau", -re(PHI) * (ONE + re(PHI) * x))?;
        out.push(b.build(name, true));
    }
    let mut b = ChargeBuilder::new(t, vec![1, 1]);
    b.set(0, 0, "tau", "tau", re(-1.0 / PHI))?;
    b.set(1, 1, "tau", "1", re(1.0 / PHI))?;
    b.set(1, 1, "tau", "tau", re(PHI.powi(-2)))?;
    b.set(0, 1, "tau", "tau", re(PHI.sqrt()) * Complex64::new(1.0, -1.0 / PHI))?;
    b.set(1, 0, "tau", "tau", re(1.0 / PHI.sqrt()) * Complex64::new(1.0, 1.0 / PHI))?;
    out.push(b.build("U_1_tau", true));
    Ok(out)
}

fn yang_lee_charges(t: &TubeCategory) -> Result<Vec<GeneralisedCharge>> {
    let re = |v: f64| Complex64::new(v, 0.0);
    let mut out = vec![];
    let mut b = ChargeBuilder::new(t, vec![1, 0]);
    b.set(0, 0, "tau", "tau", re(-1.0 / PHI))?;
    out.push(b.build("U_1", false));
    let disc = (PHI + 0.75).sqrt();
    for (sign, name) in [(1.0, "U_tau_+"), (-1.0, "U_tau_-")] {
        let x = Complex64::new(-0.5, sign * disc);
        let mut b = ChargeBuilder::new(t, vec![0, 1]);
        b.set(1, 1, "tau", "1", x)?;
        b.set(1, 1, "tau", "tau", re(1.0 / PHI) * (ONE - x / PHI))?;
        out.push(b.build(name, false));
    }
    let mut b = ChargeBuilder::new(t, vec![1, 1]);
    b.set(0, 0, "tau", "tau", re(PHI))?;
    b.set(1, 1, "tau", "1", re(-PHI))?;
    b.set(1, 1, "tau", "tau", re(PHI * PHI))?;
    b.set(0, 1, "tau", "tau", re(PHI.sqrt()) * Complex64::new(1.0, PHI))?;
    b.set(1, 0, "tau", "tau", re(1.0 / PHI.sqrt()) * Complex64::new(1.0, -PHI))?;
    out.push(b.build("U_1_tau", false));
    Ok(out)
}

fn rep_s3_charges(t: &TubeCategory) -> Result<Vec<GeneralisedCharge>> {
    let re = |v: f64| Complex64::new(v, 0.0);
    let r3 = 3f64.sqrt();
    let r2 = 2f64.sqrt();
    let mut out = vec![];
    // U_1 and U_ψ
    let mut b = ChargeBuilder::new(t, vec![1, 0, 0]);
    b.set(0, 0, "psi", "psi", re(1.0))?;
    b.set(0, 0, "pi", "pi", re(2.0))?;
    out.push(b.build("U_1", true));
    let mut b = ChargeBuilder::new(t, vec![0, 1, 0]);
    b.set(1, 1, "psi", "1", re(1.0))?;
    b.set(1, 1, "pi", "pi", re(-2.0))?;
    out.push(b.build("U_psi", true));
    // U_π^(n)
    for n in 0..3u32 {
        let q = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * n as f64 / 3.0);
        let mut b = ChargeBuilder::new(t, vec![0, 0, 1]);
        b.set(2, 2, "psi", "pi", re(-1.0))?;
        b.set(2, 2, "pi", "1", 0.5 * q)?;
        b.set(2, 2, "pi", "psi", -0.5 * q)?;
        b.set(2, 2, "pi", "pi", q.conj())?;
        out.push(b.build(&format!("U_pi_{n}"), true));
    }
    // U_{1,ψ}
    let mut b = ChargeBuilder::new(t, vec![1, 1, 0]);
    b.set(0, 0, "psi", "psi", re(1.0))?;
    b.set(1, 1, "psi", "1", re(1.0))?;
    b.set(0, 0, "pi", "pi", re(-1.0))?;
    b.set(1, 1, "pi", "pi", re(1.0))?;
    b.set(0, 1, "pi", "pi", re(r3))?;
    b.set(1, 0, "pi", "pi", re(r3))?;
    out.push(b.build("U_1_psi", true));
    // U_{1,π}
    let mut b = ChargeBuilder::new(t, vec![1, 0, 1]);
    b.set(0, 0, "psi", "psi", re(-1.0))?;
    b.set(2, 2, "psi", "pi", re(1.0))?;
    b.set(2, 2, "pi", "1", re(0.5))?;
    b.set(0, 2, "pi", "pi", re(r2))?;
    b.set(2, 2, "pi", "psi", re(0.5))?;
    b.set(2, 0, "pi", "pi", re(r2))?;
    out.push(b.build("U_1_pi", true));
    // U_{ψ,π}
    let mut b = ChargeBuilder::new(t, vec![0, 1, 1]);
    b.set(1, 1, "psi", "1", re(-1.0))?;
    b.set(2, 2, "psi", "pi", re(1.0))?;
    b.set(2, 2, "pi", "1", re(-0.5))?;
    b.set(1, 2, "pi", "pi", re(r2))?;
    b.set(2, 2, "pi", "psi", re(-0.5))?;
    b.set(2, 1, "pi", "pi", re(-r2))?;
    out.push(b.build("U_psi_pi", true));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Tambara-Yamagami
// ---------------------------------------------------------------------------

fn parse_ty(id: &str) -> Result<(usize, f64)> {
    let parts: Vec<&str> = id.split(':').collect();
    if parts.len() != 4 || parts[2] != "chi1" {
        return Err(Error::UnknownCategory(id.into()));
    }
    let n = match parts[1] {
        "z2" => 2usize,
        "z3" => 3,
        _ => return Err(Error::UnknownCategory(id.into())),
    };
    let sign = match parts[3] {
        "+" => 1.0,
        "-" => -1.0,
        _ => return Err(Error::UnknownCategory(id.into())),
    };
    Ok((n, sign / (n as f64).sqrt()))
}

fn load_ty(id: &str) -> Result<CatalogEntry> {
    let (n, s) = parse_ty(id)?;
    let group = FiniteGroupTable::cyclic(n);
    let chi = Bicharacter::standard_cyclic(n);
    let cat = build_ty(&group, &chi, s)?;
    let tube = derive_tube(&cat)?;
    let charges = ty_charges(&tube, &group, &chi, s)?;
    Ok(CatalogEntry {
        id: id.into(),
        category: Some(cat),
        reference: None,
        tube,
        charges,
    })
}

/// Square roots of a unit-modulus complex number (principal and its negative).
fn unit_sqrts(z: Complex64) -> [Complex64; 2] {
    let r = Complex64::from_polar(z.norm().sqrt(), z.arg() / 2.0);
    [r, -r]
}

/// All ρ: Z_n → U(1) with ρ(a+b) = ρ(a)ρ(b)χ(a,b).
fn chi_antiderivatives(n: usize, chi: &Bicharacter) -> Vec<Vec<Complex64>> {
    let mut out = vec![];
    for k in 0..2 * n {
        let u = Complex64::from_polar(1.0, std::f64::consts::PI * k as f64 / n as f64);
        let mut rho = vec![ONE; n];
        for a in 0..n - 1 {
            rho[a + 1] = rho[a] * u * chi.get(a, 1);
        }
        // closure at a = n
        let wrap = rho[n - 1] * u * chi.get(n - 1, 1);
        if (wrap - ONE).norm() < 1e-9 {
            out.push(rho);
        }
    }
    assert_eq!(out.len(), n, "antiderivative count");
    out
}

fn ty_charges(
    t: &TubeCategory,
    group: &FiniteGroupTable,
    chi: &Bicharacter,
    s: f64,
) -> Result<Vec<GeneralisedCharge>> {
    let n = group.order;
    let m = n; // object index of the non-invertible simple
    let name = |a: usize| group.names[a].clone();
    let mut out = vec![];
    // U_x^Δ, Δ² = χ*(x,x)
    for x in 0..n {
        for (di, delta) in unit_sqrts(chi.get(x, x).conj()).into_iter().enumerate() {
            let mut b = ChargeBuilder::new(t, {
                let mut d = vec![0; n + 1];
                d[x] = 1;
                d
            });
            for a in 0..n {
                b.set(x, x, &name(a), &name(group.mul[a][x]), chi.get(a, x))?;
            }
            b.set(x, x, "m", "m", delta / s)?;
            out.push(b.build(&format!("U_{}_{}", name(x), ["+", "-"][di]), true));
        }
    }
    // U_ρ^Δ: U(t_m^a) = ρ(a) with ρ(a+b) = ρ(a)ρ(b)χ(a,b),
    // U(t_m^{m,a}) = Δ·ρ(a)·χ*(a,a), Δ² = (s/|A|)·Σ_c ρ(c)
    for (ri, rho) in chi_antiderivatives(n, chi).into_iter().enumerate() {
        let gauss: Complex64 = rho.iter().sum();
        for (di, delta) in unit_sqrts(gauss * s / n as f64).into_iter().enumerate() {
            let mut b = ChargeBuilder::new(t, {
                let mut d = vec![0; n + 1];
                d[m] = 1;
                d
            });
            for a in 0..n {
                b.set(m, m, &name(a), "m", rho[a])?;
                b.set(m, m, "m", &name(a), delta * rho[a] * chi.get(a, a).conj())?;
            }
            out.push(b.build(&format!("U_rho{ri}_{}", ["+", "-"][di]), true));
        }
    }
    // U_{x,y}, x < y
    for x in 0..n {
        for y in x + 1..n {
            let mut dims = vec![0; n + 1];
            dims[x] = 1;
            dims[y] = 1;
            let mut b = ChargeBuilder::new(t, dims);
            for a in 0..n {
                b.set(x, x, &name(a), &name(group.mul[a][x]), chi.get(a, y))?;
                b.set(y, y, &name(a), &name(group.mul[a][y]), chi.get(a, x))?;
            }
            b.set(x, y, "m", "m", chi.get(x, y).conj() / s)?;
            b.set(y, x, "m", "m", ONE / s)?;
            out.push(b.build(&format!("U_{}_{}", name(x), name(y)), true));
        }
    }
    Ok(out)
}

/// The standard complete channel bases for the non-invertible TY defect:
/// {s·t_{x→y}^m} out of an invertible object x, {t_m^{m,a}} out of m.
/// Valid for both signs of s (for invertible defects use the canonical basis).
pub fn ty_defect_m_basis(entry: &CatalogEntry, source: usize) -> Result<ChannelBasis> {
    let t = &entry.tube;
    let n = t.objects.len() - 1;
    let cat = entry.category.as_ref().ok_or(Error::MissingFSymbols(entry.id.clone()))?;
    let s = cat.dims.d[n].signum() / (n as f64).sqrt();
    let mut elements = vec![];
    if source < n {
        for y in 0..n {
            let i = t
                .find(source, y, "m", "m")
                .ok_or_else(|| Error::UnknownLabel(format!("t[{source}->{y};m]")))?;
            elements.push(ChannelElement {
                target: y,
                morphism: TubeMorphism::scaled(i, Complex64::new(s, 0.0)),
            });
        }
    } else {
        for a in 0..n {
            let i = t
                .find(n, n, "m", &t.objects[a].display_name)
                .ok_or_else(|| Error::UnknownLabel(format!("t[m->m;m;{a}]")))?;
            elements.push(ChannelElement { target: n, morphism: TubeMorphism::basis(i) });
        }
    }
    Ok(ChannelBasis { source, defect: "m".into(), elements })
}

// ---------------------------------------------------------------------------
// Groupoid symmetries: pointed categories and the 2-group
// ---------------------------------------------------------------------------

/// A finite group acting on a finite set of objects with a phase twisting the
/// composition of the action tubes:
/// tub[b→^gb; g] ∘ tub[a→b; h] = θ(a, g, h) · tub[a→^{gh}a; gh], b = ^ha.
pub struct GroupoidSymmetry {
    pub objects: Vec<String>,
    pub group: FiniteGroupTable,
    /// act[g][a] = object index of ^g a
    pub act: Vec<Vec<usize>>,
    pub theta: Box<dyn Fn(usize, usize, usize) -> Complex64>,
}

impl GroupoidSymmetry {
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.objects.len()];
        let mut out = vec![];
        for a in 0..self.objects.len() {
            if seen[a] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.group.order).map(|g| self.act[g][a]).collect();
            orbit.sort();
            orbit.dedup();
            for &b in &orbit {
                seen[b] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// `channel_name(a, g)` labels the channel of tub[a→^ga; g] so the
    /// presentation can mirror an externally fixed basis convention.
    pub fn presentation_with(
        &self,
        channel_name: &dyn Fn(usize, usize) -> String,
    ) -> TubePresentation {
        let n_obj = self.objects.len();
        let ng = self.group.order;
        let index = |a: usize, g: usize| a * ng + g;
        let basis: Vec<PresentedBasis> = (0..n_obj)
            .flat_map(|a| {
                (0..ng).map(move |g| (a, g))
            })
            .map(|(a, g)| PresentedBasis {
                src: self.objects[a].clone(),
                tgt: self.objects[self.act[g][a]].clone(),
                defect: self.group.names[g].clone(),
                channel: channel_name(a, g),
            })
            .collect();
        let identities: Vec<usize> = (0..n_obj).map(|a| index(a, 0)).collect();
        let mut compose = vec![];
        for a in 0..n_obj {
            for h in 0..ng {
                let b = self.act[h][a];
                for g in 0..ng {
                    let gh = self.group.mul[g][h];
                    let c = (self.theta)(a, g, h);
                    compose.push(ComposeEntry {
                        g: index(b, g),
                        f: index(a, h),
                        terms: vec![Term { h: index(a, gh), re: c.re, im: c.im }],
                    });
                }
            }
        }
        let dagger = (0..n_obj)
            .flat_map(|a| (0..ng).map(move |g| (a, g)))
            .map(|(a, g)| {
                let gi = self.group.inv(g);
                let c = (self.theta)(a, gi, g).conj();
                DaggerEntry {
                    f: index(a, g),
                    terms: vec![Term { h: index(self.act[g][a], gi), re: c.re, im: c.im }],
                }
            })
            .collect();
        TubePresentation {
            objects: self.objects.clone(),
            basis,
            identities,
            compose,
            dagger: Some(dagger),
        }
    }
}

/// Charges of a groupoid symmetry: for each orbit pick a representative x,
/// decompose the θ-twisted stabilizer algebra into irreps ρ, and induce
/// U(tub[y→^gy; g]) = κ_y(g)·ρ(g_y) with g_y = r_{^gy}·g·r_y⁻¹ and
/// κ_y(g) = θ(y, r_{^gy}, g)/θ(y, g_y, r_y), where ^{r_y}y = x.
pub fn groupoid_charges(
    sym: &GroupoidSymmetry,
    _t: &TubeCategory,
    tube_index: &dyn Fn(usize, usize) -> Option<usize>,
    orbit_reps: Option<&[usize]>,
    seed: u64,
) -> Result<Vec<GeneralisedCharge>> {
    let n_obj = sym.objects.len();
    let ng = sym.group.order;
    let orbits = sym.orbits();
    let mut out = vec![];
    for orbit in &orbits {
        let x = match orbit_reps {
            Some(reps) => *reps
                .iter()
                .find(|r| orbit.contains(r))
                .ok_or_else(|| Error::Validation("orbit_reps misses an orbit".into()))?,
            None => orbit[0],
        };
        // transversal: r_y with ^{r_y} y = x (r_x = identity)
        let r: HashMap<usize, usize> = orbit
            .iter()
            .map(|&y| {
                let g = if y == x {
                    0
                } else {
                    (0..ng).find(|&g| sym.act[g][y] == x).expect("transitive orbit")
                };
                (y, g)
            })
            .collect();
        let stab: Vec<usize> = (0..ng).filter(|&h| sym.act[h][x] == x).collect();
        // θ-twisted stabilizer algebra as a one-object tube category
        let pres = TubePresentation {
            objects: vec!["pt".into()],
            basis: stab
                .iter()
                .map(|&h| PresentedBasis {
                    src: "pt".into(),
                    tgt: "pt".into(),
                    defect: sym.group.names[h].clone(),
                    channel: sym.group.names[h].clone(),
                })
                .collect(),
            identities: vec![0],
            compose: stab
                .iter()
                .enumerate()
                .flat_map(|(gi, &g)| {
                    let stab = &stab;
                    let sym_ref = &sym;
                    stab.iter().enumerate().map(move |(hi, &h)| {
                        let gh = sym_ref.group.mul[g][h];
                        let pos = stab.iter().position(|&k| k == gh).expect("closed");
                        let c = (sym_ref.theta)(x, g, h);
                        ComposeEntry {
                            g: gi,
                            f: hi,
                            terms: vec![Term { h: pos, re: c.re, im: c.im }],
                        }
                    })
                })
                .collect(),
            dagger: Some(
                stab.iter()
                    .enumerate()
                    .map(|(hi, &h)| {
                        let inv = sym.group.inv(h);
                        let pos = stab.iter().position(|&k| k == inv).expect("closed");
                        let c = (sym.theta)(x, inv, h).conj();
                        DaggerEntry {
                            f: hi,
                            terms: vec![Term { h: pos, re: c.re, im: c.im }],
                        }
                    })
                    .collect(),
            ),
        };
        let stab_tube = presented_tube(&pres)?;
        let irreps = decompose_irreps_seeded(&stab_tube, Tolerance::default(), seed)?;
        for (ri, rho) in irreps.iter().enumerate() {
            let d = rho.sector_dims[0];
            let mut sector_dims = vec![0usize; n_obj];
            for &y in orbit {
                sector_dims[y] = d;
            }
            let mut action = HashMap::new();
            for &y in orbit {
                for g in 0..ng {
                    let z = sym.act[g][y];
                    let g_y = sym.group.mul[r[&z]][sym.group.mul[g][sym.group.inv(r[&y])]];
                    let pos = stab
                        .iter()
                        .position(|&k| k == g_y)
                        .ok_or_else(|| Error::Validation("g_y not in stabilizer".into()))?;
                    let kappa = (sym.theta)(y, r[&z], g) / (sym.theta)(y, g_y, r[&y]);
                    let i = tube_index(y, g).ok_or_else(|| {
                        Error::UnknownLabel(format!("tube ({y}, g={g}) not found"))
                    })?;
                    action.insert(i, rho.action_of(&stab_tube, pos).scale(kappa));
                }
            }
            out.push(GeneralisedCharge {
                name: format!("U_{}_{}", sym.objects[x], ri),
                sector_dims,
                action,
                dagger_compatible: true,
            });
        }
    }
    Ok(out)
}

fn pointed_symmetry(group: &FiniteGroupTable, omega: &Cocycle3) -> GroupoidSymmetry {
    let ng = group.order;
    let act: Vec<Vec<usize>> = (0..ng)
        .map(|g| {
            (0..ng)
                .map(|a| group.mul[group.mul[g][a]][group.inv(g)])
                .collect()
        })
        .collect();
    let mul = group.mul.clone();
    let inv: Vec<usize> = (0..ng).map(|g| group.inv(g)).collect();
    let omega = omega.clone();
    let act_c = act.clone();
    let theta = move |a: usize, g: usize, h: usize| -> Complex64 {
        // transgression τ_a(ω)(g,h)
        let gh = mul[g][h];
        let a_gh = act_c[gh][a];
        let a_h = act_c[h][a];
        omega.get(g, h, a) * omega.get(a_gh, g, h) / omega.get(g, a_h, h)
    };
    let _ = inv;
    GroupoidSymmetry {
        objects: group.names.clone(),
        group: group.clone(),
        act,
        theta: Box::new(theta),
    }
}

fn omega_z2_nontrivial() -> Cocycle3 {
    let mut v = Cocycle3::trivial(2);
    v.values[1][1][1] = Complex64::new(-1.0, 0.0);
    v
}

fn load_pointed(id: &str, opts: &CatalogOptions) -> Result<CatalogEntry> {
    let (group, omega) = match id {
        "pointed:z2:trivial" => (FiniteGroupTable::cyclic(2), Cocycle3::trivial(2)),
        "pointed:z2:omega" => (FiniteGroupTable::cyclic(2), omega_z2_nontrivial()),
        "pointed:s3:trivial" => (FiniteGroupTable::s3(), Cocycle3::trivial(6)),
        _ => return Err(Error::UnknownCategory(id.into())),
    };
    let cat = build_pointed(&group, &omega)?;
    let tube = derive_tube(&cat)?;
    let sym = pointed_symmetry(&group, &omega);
    let names = group.names.clone();
    let mul = group.mul.clone();
    let charges = {
        let t = &tube;
        let lookup = |y: usize, g: usize| -> Option<usize> {
            t.find(
                y,
                sym.act[g][y],
                &names[g],
                &names[mul[g][y]],
            )
        };
        groupoid_charges(&sym, t, &lookup, opts.orbit_reps.as_deref(), opts.seed)?
    };
    let reference = sym.presentation_with(&|a, g| names[mul[g][a]].clone());
    Ok(CatalogEntry {
        id: id.into(),
        category: Some(cat),
        reference: Some(reference),
        tube,
        charges,
    })
}

fn two_group_symmetry(coboundary: bool) -> GroupoidSymmetry {
    // objects: elements of Z2×Z2 indexed a0 + 2·a1; acting group Z2 = {1, s}
    // with s swapping the two coordinates
    let objects = FiniteGroupTable::z2z2().names;
    let group = FiniteGroupTable::cyclic(2);
    let act: Vec<Vec<usize>> = vec![
        (0..4).collect(),
        (0..4).map(|a| (a >> 1) | ((a & 1) << 1)).collect(),
    ];
    let theta = move |a: usize, g: usize, h: usize| -> Complex64 {
        // ⟨λ(g,h), ^{gh}a⟩ with λ(s,s) = χ_(1,1) in the coboundary variant
        if coboundary && g == 1 && h == 1 {
            let bits = (a & 1) + (a >> 1);
            Complex64::new(if bits % 2 == 1 { -1.0 } else { 1.0 }, 0.0)
        } else {
            ONE
        }
    };
    GroupoidSymmetry { objects, group, act, theta: Box::new(theta) }
}

fn load_two_group(id: &str, opts: &CatalogOptions) -> Result<CatalogEntry> {
    let coboundary = match id {
        "2group:z2z2-z2:trivial" => false,
        "2group:z2z2-z2:coboundary" => true,
        _ => return Err(Error::UnknownCategory(id.into())),
    };
    let sym = two_group_symmetry(coboundary);
    let pres = sym.presentation_with(&|_, g| sym.group.names[g].clone());
    let tube = presented_tube(&pres)?;
    let names = sym.group.names.clone();
    let charges = {
        let t = &tube;
        let lookup =
            |y: usize, g: usize| -> Option<usize> { t.find(y, sym.act[g][y], &names[g], &names[g]) };
        groupoid_charges(&sym, t, &lookup, opts.orbit_reps.as_deref(), opts.seed)?
    };
    Ok(CatalogEntry {
        id: id.into(),
        category: None,
        reference: Some(pres),
        tube,
        charges,
    })
}

/// Complete single-element channel basis for an invertible groupoid defect g
/// out of `source`: {tub[source → ^g source; g]}.
pub fn groupoid_defect_basis(
    entry: &CatalogEntry,
    defect: &str,
    source: usize,
) -> Result<ChannelBasis> {
    let t = &entry.tube;
    let (i, b) = t
        .basis
        .iter()
        .enumerate()
        .find(|(_, b)| b.source == source && b.defect == defect)
        .ok_or_else(|| Error::UnknownLabel(format!("defect '{defect}' out of {source}")))?;
    Ok(ChannelBasis {
        source,
        defect: defect.into(),
        elements: vec![ChannelElement { target: b.target, morphism: TubeMorphism::basis(i) }],
    })
}

// ---------------------------------------------------------------------------
// 2Rep((Z2×Z2)[1] ⋊ Z2)
// ---------------------------------------------------------------------------

fn load_two_rep(id: &str) -> Result<CatalogEntry> {
    let pres = reference_presentation("2rep-z2z2-z2")?;
    let tube = presented_tube(&pres)?;
    let charges = two_rep_charges(&tube)?;
    Ok(CatalogEntry {
        id: id.into(),
        category: None,
        reference: Some(pres),
        tube,
        charges,
    })
}

fn two_rep_charges(t: &TubeCategory) -> Result<Vec<GeneralisedCharge>> {
    let re = |v: f64| Complex64::new(v, 0.0);
    let r2 = 2f64.sqrt();
    let mut out = vec![];
    for (sign, name) in [(1.0, "U_1_+"), (-1.0, "U_1_-")] {
        let mut b = ChargeBuilder::new(t, vec![1, 0]);
        b.set(0, 0, "V", "V", re(1.0))?;
        b.set(0, 0, "D", "D", re(sign * r2))?;
        out.push(b.build(name, true));
    }
    for (sign, name) in [(1.0, "U_gamma_+"), (-1.0, "U_gamma_-")] {
        let mut b = ChargeBuilder::new(t, vec![0, 1]);
        b.set(1, 1, "V", "V", re(-1.0))?;
        b.set(1, 1, "D", "D", re(sign * r2))?;
        out.push(b.build(name, true));
    }
    let mut b = ChargeBuilder::new(t, vec![1, 1]);
    b.set(0, 0, "V", "V", re(-1.0))?;
    b.set(0, 0, "D", "D", re(0.0))?;
    b.set(1, 1, "V", "V", re(1.0))?;
    b.set(1, 1, "D", "D", re(0.0))?;
    b.set(0, 1, "D", "D", re(r2))?;
    b.set(1, 0, "D", "D", re(r2))?;
    out.push(b.build("U_1_gamma", true));
    Ok(out)
}

/// The complete channel basis for the 2-dimensional defect D of the 2Rep
/// entry: {(1/√2)·(each D-tube out of source)}.
pub fn two_rep_defect_d_basis(entry: &CatalogEntry, source: usize) -> Result<ChannelBasis> {
    let t = &entry.tube;
    let c = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
    let mut elements = vec![];
    for (i, b) in t.basis.iter().enumerate() {
        if b.source == source && b.defect == "D" {
            elements.push(ChannelElement { target: b.target, morphism: TubeMorphism::scaled(i, c) });
        }
    }
    if elements.is_empty() {
        return Err(Error::UnknownLabel(format!("defect 'D' out of {source}")));
    }
    Ok(ChannelBasis { source, defect: "D".into(), elements })
}

/// The standard complete channel basis for any defect of a catalog entry.
pub fn standard_channel_basis(entry: &CatalogEntry, defect: &str, source: usize) -> Result<ChannelBasis> {
    if entry.id.starts_with("ty:") {
        if defect == "m" {
            return ty_defect_m_basis(entry, source);
        }
        // invertible defect: the single action tube is complete; covers the
        // s < 0 variants that the canonical-basis route rejects
        return groupoid_defect_basis(entry, defect, source);
    }
    if entry.id == "2rep-z2z2-z2" {
        if defect == "D" {
            return two_rep_defect_d_basis(entry, source);
        }
        return groupoid_defect_basis(entry, defect, source);
    }
    if entry.id.starts_with("pointed:") || entry.id.starts_with("2group:") {
        return groupoid_defect_basis(entry, defect, source);
    }
    let cat = entry
        .category
        .as_ref()
        .ok_or_else(|| Error::MissingFSymbols(entry.id.clone()))?;
    canonical_channel_basis(cat, &entry.tube, cat.label_id(defect)?, source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charges::{character_vector, decompose_irreps, identify, verify_charge};
    use crate::channel::completeness_residual;
    use crate::tube::verify_against_reference;

    #[test]
    fn all_entries_load_and_verify() {
        for id in CATALOG_IDS {
            let entry = load(id).unwrap_or_else(|e| panic!("{id}: {e}"));
            assert!(entry.tube.associativity_residual() < 1e-9, "{id}");
            assert!(entry.tube.identity_residual() < 1e-12, "{id}");
            for u in &entry.charges {
                let rep = verify_charge(&entry.tube, u, Tolerance::abs(1e-9)).unwrap();
                assert!(rep.pass, "{id} charge {}: {:?}", u.name, rep.messages.first());
            }
            if let Some(r) = &entry.reference {
                let rep = verify_against_reference(&entry.tube, r).unwrap();
                assert!(rep.pass, "{id} reference: {:?}", rep.messages.first());
            }
        }
    }

    #[test]
    fn charge_counts_and_artin_wedderburn() {
        let expect = [
            ("fib", 4, 7),
            ("yang-lee", 4, 7),
            ("rep-s3", 8, 17),
            ("ty:z2:chi1:+", 9, 12),
            ("ty:z2:chi1:-", 9, 12),
            ("ty:z3:chi1:+", 15, 24),
            ("ty:z3:chi1:-", 15, 24),
            ("pointed:z2:trivial", 4, 4),
            ("pointed:z2:omega", 4, 4),
            ("pointed:s3:trivial", 8, 36),
            ("2group:z2z2-z2:trivial", 5, 8),
            ("2group:z2z2-z2:coboundary", 5, 8),
            ("2rep-z2z2-z2", 5, 8),
        ];
        for (id, n_charges, tube_dim) in expect {
            let entry = load(id).unwrap();
            assert_eq!(entry.charges.len(), n_charges, "{id} charge count");
            assert_eq!(entry.tube.total_dim(), tube_dim, "{id} tube dim");
            let aw: usize = entry.charges.iter().map(|u| u.total_dim().pow(2)).sum();
            assert_eq!(aw, tube_dim, "{id} sum of squared dims");
        }
    }

    #[test]
    fn hardcoded_charges_match_decomposition() {
        // every decomposed irrep identifies with exactly one catalog charge
        for id in ["fib", "rep-s3", "ty:z2:chi1:+", "2rep-z2z2-z2", "pointed:s3:trivial"] {
            let entry = load(id).unwrap();
            let irreps = decompose_irreps(&entry.tube, Tolerance::default()).unwrap();
            assert_eq!(irreps.len(), entry.charges.len(), "{id}");
            let mut hits = vec![0usize; entry.charges.len()];
            for u in &irreps {
                let k = identify(&entry.tube, u, &entry.charges)
                    .unwrap()
                    .unwrap_or_else(|| panic!("{id}: unmatched irrep"));
                hits[k] += 1;
            }
            assert!(hits.iter().all(|&h| h == 1), "{id}: {hits:?}");
        }
    }

    #[test]
    fn charges_pairwise_distinct() {
        for id in CATALOG_IDS {
            let entry = load(id).unwrap();
            let chars: Vec<_> = entry
                .charges
                .iter()
                .map(|u| character_vector(&entry.tube, u))
                .collect();
            for i in 0..chars.len() {
                for j in i + 1..chars.len() {
                    assert!(
                        chars[i].max_diff(&chars[j]) > 1e-6,
                        "{id}: charges {i} and {j} share a character"
                    );
                }
            }
        }
    }

    #[test]
    fn standard_bases_complete() {
        for id in CATALOG_IDS {
            if id == "yang-lee" {
                continue; // no complete basis exists for the non-invertible defect
            }
            let entry = load(id).unwrap();
            let defects: Vec<String> = {
                let mut d: Vec<String> =
                    entry.tube.basis.iter().map(|b| b.defect.clone()).collect();
                d.sort();
                d.dedup();
                d
            };
            for defect in defects {
                for x in 0..entry.tube.objects.len() {
                    match standard_channel_basis(&entry, &defect, x) {
                        Ok(basis) => {
                            let res = completeness_residual(&entry.tube, &basis).unwrap();
                            assert!(res < 1e-9, "{id} defect {defect} X={x}: {res:.3e}");
                        }
                        Err(Error::UnknownLabel(_)) => {} // defect does not act on x
                        Err(e) => panic!("{id} defect {defect} X={x}: {e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn alternate_orbit_representatives() {
        // pointed:s3: pick the other representatives of the two nontrivial orbits
        let base = load("pointed:s3:trivial").unwrap();
        let alt = load_with_options(
            "pointed:s3:trivial",
            &CatalogOptions { orbit_reps: Some(vec![0, 2, 4]), seed: 42 },
        )
        .unwrap();
        assert_eq!(alt.charges.len(), base.charges.len());
        for u in &alt.charges {
            let rep = verify_charge(&alt.tube, u, Tolerance::abs(1e-9)).unwrap();
            assert!(rep.pass, "{}: {:?}", u.name, rep.messages.first());
            assert!(identify(&alt.tube, u, &base.charges).unwrap().is_some());
        }
        // 2-group coboundary with the other representative of the mixed orbit
        let base = load("2group:z2z2-z2:coboundary").unwrap();
        let alt = load_with_options(
            "2group:z2z2-z2:coboundary",
            &CatalogOptions { orbit_reps: Some(vec![0, 2, 3]), seed: 42 },
        )
        .unwrap();
        for u in &alt.charges {
            let rep = verify_charge(&alt.tube, u, Tolerance::abs(1e-9)).unwrap();
            assert!(rep.pass, "{}: {:?}", u.name, rep.messages.first());
            assert!(identify(&alt.tube, u, &base.charges).unwrap().is_some());
        }
    }
}
