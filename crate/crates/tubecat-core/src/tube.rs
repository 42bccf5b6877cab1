//! Tube categories: basis morphisms, bilinear composition structure constants,
//! and dagger — derived from F-symbols (multiplicity-free case) or ingested
//! from presented tables.

use crate::error::{Error, Result};
use crate::fusion::{FusionCategoryData, SimpleLabel, ValidationReport};
use crate::numerics::ComplexMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Basis morphism tub[X→Y; A; k]: defect A wrapped around the incoming
/// sector X, outgoing sector Y, through fusion channel k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TubeBasisMorphism {
    /// Index into TubeCategory::objects.
    pub source: usize,
    pub target: usize,
    pub defect: String,
    pub channel: String,
    /// Simple-object id of the defect when the tube is derived from F-symbols.
    pub defect_id: Option<usize>,
    /// Simple-object id of the channel label for derived tubes.
    pub channel_id: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Derived,
    Presented,
}

/// A linear combination of tube basis morphisms (by basis index).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TubeMorphism {
    pub terms: BTreeMap<usize, Complex64>,
}

impl TubeMorphism {
    pub fn basis(i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(i, ONE);
        TubeMorphism { terms }
    }

    pub fn scaled(i: usize, c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(i, c);
        TubeMorphism { terms }
    }

    pub fn add_term(&mut self, i: usize, c: Complex64) {
        let e = self.terms.entry(i).or_insert(ZERO);
        *e += c;
        if e.norm() < 1e-15 {
            self.terms.remove(&i);
        }
    }

    pub fn scale(&self, z: Complex64) -> Self {
        TubeMorphism { terms: self.terms.iter().map(|(&i, &c)| (i, c * z)).collect() }
    }

    pub fn max_diff(&self, other: &TubeMorphism) -> f64 {
        let mut keys: Vec<usize> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.dedup();
        keys.iter()
            .map(|k| {
                (self.terms.get(k).copied().unwrap_or(ZERO)
                    - other.terms.get(k).copied().unwrap_or(ZERO))
                .norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Presented tube-category tables (the external JSON schema).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TubePresentation {
    pub objects: Vec<String>,
    pub basis: Vec<PresentedBasis>,
    /// Basis index of the identity morphism of each object, aligned with `objects`.
    pub identities: Vec<usize>,
    /// Entries for composable pairs; omitted composable pairs compose to zero.
    pub compose: Vec<ComposeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dagger: Option<Vec<DaggerEntry>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresentedBasis {
    pub src: String,
    pub tgt: String,
    pub defect: String,
    pub channel: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComposeEntry {
    pub g: usize,
    pub f: usize,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DaggerEntry {
    pub f: usize,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Term {
    pub h: usize,
    pub re: f64,
    pub im: f64,
}

/// A tube category with explicit structure constants.
#[derive(Debug, Clone)]
pub struct TubeCategory {
    pub objects: Vec<SimpleLabel>,
    pub basis: Vec<TubeBasisMorphism>,
    /// (g, f) → terms of g∘f. Key present only for composable pairs.
    pub compose_table: HashMap<(usize, usize), Vec<(usize, Complex64)>>,
    /// dagger[f] = terms of f† (antilinear: coefficients of a combination are
    /// conjugated before expansion). None when the presentation has no dagger.
    pub dagger_table: Option<Vec<Vec<(usize, Complex64)>>>,
    /// Basis index of id_X per object index.
    pub identity_index: Vec<usize>,
    pub provenance: Provenance,
}

/// dim 𝒞(A⊗X, Y⊗A) = Σ_k N[A][X][k]·N[Y][A][k].
pub fn channel_space_dim(cat: &FusionCategoryData, a: usize, x: usize, y: usize) -> usize {
    (0..cat.n_simples())
        .map(|k| (cat.n(a, x, k) * cat.n(y, a, k)) as usize)
        .sum()
}

impl TubeCategory {
    pub fn total_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn find(&self, src: usize, tgt: usize, defect: &str, channel: &str) -> Option<usize> {
        self.basis.iter().position(|b| {
            b.source == src && b.target == tgt && b.defect == defect && b.channel == channel
        })
    }

    pub fn object_id(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o.display_name == name)
            .ok_or_else(|| Error::UnknownLabel(name.into()))
    }

    pub fn composable(&self, g: usize, f: usize) -> bool {
        self.basis[g].source == self.basis[f].target
    }

    /// g∘f on basis indices; None when not composable.
    pub fn compose_basis(&self, g: usize, f: usize) -> Option<TubeMorphism> {
        if !self.composable(g, f) {
            return None;
        }
        let mut out = TubeMorphism::default();
        if let Some(terms) = self.compose_table.get(&(g, f)) {
            for &(h, c) in terms {
                out.add_term(h, c);
            }
        }
        Some(out)
    }

    /// Bilinear composition of linear combinations; all terms must be
    /// block-compatible (every f target equals every g source).
    pub fn compose(&self, g: &TubeMorphism, f: &TubeMorphism) -> Result<TubeMorphism> {
        for (&gi, _) in &g.terms {
            for (&fi, _) in &f.terms {
                if !self.composable(gi, fi) {
                    return Err(Error::NonComposable);
                }
            }
        }
        let mut out = TubeMorphism::default();
        for (&gi, &gc) in &g.terms {
            for (&fi, &fc) in &f.terms {
                if let Some(terms) = self.compose_table.get(&(gi, fi)) {
                    for &(h, c) in terms {
                        out.add_term(h, gc * fc * c);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Antilinear dagger of a linear combination.
    pub fn dagger(&self, f: &TubeMorphism) -> Result<TubeMorphism> {
        let table = self.dagger_table.as_ref().ok_or(Error::DaggerRequired)?;
        let mut out = TubeMorphism::default();
        for (&fi, &fc) in &f.terms {
            for &(h, c) in &table[fi] {
                out.add_term(h, fc.conj() * c);
            }
        }
        Ok(out)
    }

    pub fn identity(&self, object: usize) -> TubeMorphism {
        TubeMorphism::basis(self.identity_index[object])
    }

    /// Max residual of associativity over all composable basis triples.
    pub fn associativity_residual(&self) -> f64 {
        let n = self.basis.len();
        let mut worst = 0.0f64;
        for h in 0..n {
            for g in 0..n {
                if !self.composable(h, g) {
                    continue;
                }
                let hg = self.compose_basis(h, g).unwrap();
                for f in 0..n {
                    if !self.composable(g, f) {
                        continue;
                    }
                    let gf = self.compose_basis(g, f).unwrap();
                    let lhs = self.compose(&hg, &TubeMorphism::basis(f)).unwrap();
                    let rhs = self.compose(&TubeMorphism::basis(h), &gf).unwrap();
                    worst = worst.max(lhs.max_diff(&rhs));
                }
            }
        }
        worst
    }

    /// Max residual of the identity laws id∘f == f == f∘id.
    pub fn identity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, b) in self.basis.iter().enumerate() {
            let f = TubeMorphism::basis(i);
            let left = self.compose(&self.identity(b.target), &f).unwrap();
            let right = self.compose(&f, &self.identity(b.source)).unwrap();
            worst = worst.max(left.max_diff(&f)).max(right.max_diff(&f));
        }
        worst
    }

    /// Max residual of dagger involution and contravariance; error if absent.
    pub fn dagger_residual(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        let n = self.basis.len();
        for i in 0..n {
            let f = TubeMorphism::basis(i);
            let dd = self.dagger(&self.dagger(&f)?)?;
            worst = worst.max(dd.max_diff(&f));
            let fd = self.dagger(&f)?;
            // dagger swaps source and target
            for (&j, _) in &fd.terms {
                if self.basis[j].source != self.basis[i].target
                    || self.basis[j].target != self.basis[i].source
                {
                    return Err(Error::DaggerViolation(format!(
                        "dagger of basis {i} has mismatched source/target"
                    )));
                }
            }
        }
        for g in 0..n {
            for f in 0..n {
                if !self.composable(g, f) {
                    continue;
                }
                let gf = self.compose_basis(g, f).unwrap();
                let lhs = self.dagger(&gf)?;
                let rhs = self.compose(
                    &self.dagger(&TubeMorphism::basis(f))?,
                    &self.dagger(&TubeMorphism::basis(g))?,
                )?;
                worst = worst.max(lhs.max_diff(&rhs));
            }
        }
        Ok(worst)
    }
}

/// Flattened associative-algebra view of the tube category.
pub struct TubeAlgebraView {
    pub total_dim: usize,
    /// left_mult[i] is the matrix of x ↦ t_i ∘ x on the basis (zero columns
    /// for non-composable pairs).
    pub left_mult: Vec<ComplexMatrix>,
}

impl TubeCategory {
    pub fn algebra_view(&self) -> TubeAlgebraView {
        let n = self.basis.len();
        let left_mult = (0..n)
            .map(|i| {
                let mut m = ComplexMatrix::zeros(n, n);
                for j in 0..n {
                    if let Some(out) = self.compose_basis(i, j) {
                        for (&h, &c) in &out.terms {
                            m[(h, j)] += c;
                        }
                    }
                }
                m
            })
            .collect();
        TubeAlgebraView { total_dim: n, left_mult }
    }
}

impl TubeAlgebraView {
    /// The regular representation is faithful iff the map t ↦ L_t has full rank.
    pub fn regular_rep_faithful(&self) -> bool {
        let n = self.total_dim;
        let m = nalgebra::DMatrix::<Complex64>::from_fn(n, n * n, |i, j| {
            self.left_mult[i].entries[j]
        });
        m.rank(1e-9) == n
    }
}

/// Derive the tube category of a multiplicity-free fusion category from its
/// F-symbols. Basis morphisms are presented in the per-object weighted basis
/// given by `cat.basis_weights` (weights cancel in composition but scale the
/// dagger).
pub fn derive_tube(cat: &FusionCategoryData) -> Result<TubeCategory> {
    if cat.f_symbols.is_none() {
        return Err(Error::MissingFSymbols(cat.name.clone()));
    }
    if !cat.ring.multiplicity_free() {
        return Err(Error::MultiplicityNotSupported);
    }
    let ns = cat.n_simples();
    // enumerate basis (X, Y, A, k) sorted by (source, target, defect, channel)
    let mut basis = vec![];
    for x in 0..ns {
        for y in 0..ns {
            for a in 0..ns {
                for k in 0..ns {
                    if cat.n(a, x, k) > 0 && cat.n(y, a, k) > 0 {
                        basis.push(TubeBasisMorphism {
                            source: x,
                            target: y,
                            defect: cat.simples[a].display_name.clone(),
                            channel: cat.simples[k].display_name.clone(),
                            defect_id: Some(a),
                            channel_id: Some(k),
                        });
                    }
                }
            }
        }
    }
    let mut index = HashMap::new();
    for (i, b) in basis.iter().enumerate() {
        index.insert(
            (b.source, b.target, b.defect_id.unwrap(), b.channel_id.unwrap()),
            i,
        );
    }
    let n = basis.len();
    let mut compose_table = HashMap::new();
    for gi in 0..n {
        let (y, z, a, l) = key_of(&basis[gi]);
        for fi in 0..n {
            let (x, yy, b, k) = key_of(&basis[fi]);
            if yy != y {
                continue;
            }
            let mut terms: Vec<(usize, Complex64)> = vec![];
            for c in cat.ring.fuse(a, b) {
                for m in 0..ns {
                    if cat.n(c, x, m) == 0 || cat.n(z, c, m) == 0 {
                        continue;
                    }
                    let coef = cat.f(a, b, x, m, c, k)
                        * cat.f_inv(a, y, b, m, k, l)
                        * cat.f(z, a, b, m, l, c);
                    if coef.norm() > 1e-14 {
                        terms.push((index[&(x, z, c, m)], coef));
                    }
                }
            }
            compose_table.insert((gi, fi), terms);
        }
    }
    // dagger: tub[X→Y;A;k]† = (w_Y/w_X)² · (d_A/κ_A) · Finv(Y,A,Ā,Y;1,k)
    //         · Finv(Ā,k,Ā,m;Y,X) · Finv(Ā,A,X,X;k,1) · tub[Y→X;Ā;m]
    let mut dagger_table = vec![vec![]; n];
    for (i, bm) in basis.iter().enumerate() {
        let (x, y, a, k) = key_of(bm);
        let ad = cat.dual(a);
        let d_a = Complex64::new(cat.dims.d[a], 0.0);
        let kappa = d_a * cat.f(a, ad, a, a, 0, 0);
        let ce2 = d_a / kappa;
        let w = (cat.basis_weights[y] / cat.basis_weights[x]).powi(2);
        let bcoef = cat.f_inv(y, a, ad, y, 0, k);
        let ccoef = cat.f_inv(ad, a, x, x, k, 0);
        for m in 0..ns {
            if cat.n(ad, y, m) == 0 || cat.n(x, ad, m) == 0 {
                continue;
            }
            let coef = Complex64::new(w, 0.0)
                * ce2
                * bcoef
                * cat.f_inv(ad, k, ad, m, y, x)
                * ccoef;
            if coef.norm() > 1e-14 {
                dagger_table[i].push((index[&(y, x, ad, m)], coef));
            }
        }
    }
    let identity_index = (0..ns)
        .map(|x| index[&(x, x, 0, x)])
        .collect();
    Ok(TubeCategory {
        objects: cat.simples.clone(),
        basis,
        compose_table,
        dagger_table: Some(dagger_table),
        identity_index,
        provenance: Provenance::Derived,
    })
}

fn key_of(b: &TubeBasisMorphism) -> (usize, usize, usize, usize) {
    (b.source, b.target, b.defect_id.unwrap(), b.channel_id.unwrap())
}

/// Ingest a presented tube category; validates associativity, identity laws,
/// and (when supplied) the dagger structure.
pub fn presented_tube(tables: &TubePresentation) -> Result<TubeCategory> {
    let n_obj = tables.objects.len();
    if tables.identities.len() != n_obj {
        return Err(Error::Schema("identities must list one basis index per object".into()));
    }
    let obj_id = |name: &str| -> Result<usize> {
        tables
            .objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::Schema(format!("unknown object '{name}' in basis")))
    };
    let mut basis = vec![];
    for b in &tables.basis {
        basis.push(TubeBasisMorphism {
            source: obj_id(&b.src)?,
            target: obj_id(&b.tgt)?,
            defect: b.defect.clone(),
            channel: b.channel.clone(),
            defect_id: None,
            channel_id: None,
        });
    }
    let n = basis.len();
    let mut compose_table: HashMap<(usize, usize), Vec<(usize, Complex64)>> = HashMap::new();
    // all composable pairs start as zero
    for g in 0..n {
        for f in 0..n {
            if basis[g].source == basis[f].target {
                compose_table.insert((g, f), vec![]);
            }
        }
    }
    for e in &tables.compose {
        if e.g >= n || e.f >= n {
            return Err(Error::Schema("compose entry references unknown basis index".into()));
        }
        if basis[e.g].source != basis[e.f].target {
            return Err(Error::Schema(format!(
                "compose entry ({}, {}) is not composable",
                e.g, e.f
            )));
        }
        let terms: Vec<(usize, Complex64)> = e
            .terms
            .iter()
            .map(|t| (t.h, Complex64::new(t.re, t.im)))
            .collect();
        for &(h, _) in &terms {
            if h >= n
                || basis[h].source != basis[e.f].source
                || basis[h].target != basis[e.g].target
            {
                return Err(Error::Schema(format!(
                    "compose result term has mismatched source/target in entry ({}, {})",
                    e.g, e.f
                )));
            }
        }
        compose_table.insert((e.g, e.f), terms);
    }
    let dagger_table = match &tables.dagger {
        None => None,
        Some(entries) => {
            let mut table = vec![vec![]; n];
            for e in entries {
                table[e.f] = e
                    .terms
                    .iter()
                    .map(|t| (t.h, Complex64::new(t.re, t.im)))
                    .collect();
            }
            Some(table)
        }
    };
    for (x, &i) in tables.identities.iter().enumerate() {
        if i >= n || basis[i].source != x || basis[i].target != x {
            return Err(Error::Schema(format!("identity of object {x} is not an endomorphism")));
        }
    }
    let t = TubeCategory {
        objects: tables
            .objects
            .iter()
            .enumerate()
            .map(|(id, name)| SimpleLabel { id, display_name: name.clone() })
            .collect(),
        basis,
        compose_table,
        dagger_table,
        identity_index: tables.identities.clone(),
        provenance: Provenance::Presented,
    };
    let assoc = t.associativity_residual();
    if assoc > 1e-9 {
        return Err(Error::AssociativityViolation(format!("max residual {assoc:.3e}")));
    }
    let idres = t.identity_residual();
    if idres > 1e-9 {
        return Err(Error::AssociativityViolation(format!(
            "identity law residual {idres:.3e}"
        )));
    }
    if t.dagger_table.is_some() {
        let dres = t.dagger_residual()?;
        if dres > 1e-9 {
            return Err(Error::DaggerViolation(format!("max residual {dres:.3e}")));
        }
    }
    Ok(t)
}

/// Compare a tube category against a reference presentation with the same
/// basis labeling; returns the max coefficient deviation over composition
/// (and dagger, when both sides have one).
pub fn verify_against_reference(t: &TubeCategory, reference: &TubePresentation) -> Result<ValidationReport> {
    if reference.basis.len() != t.basis.len() {
        return Err(Error::BasisMismatch(format!(
            "reference has {} basis elements, tube has {}",
            reference.basis.len(),
            t.basis.len()
        )));
    }
    // map reference indices to t indices by labels
    let mut map = vec![0usize; reference.basis.len()];
    for (ri, rb) in reference.basis.iter().enumerate() {
        let src = t.object_id(&rb.src)?;
        let tgt = t.object_id(&rb.tgt)?;
        map[ri] = t
            .find(src, tgt, &rb.defect, &rb.channel)
            .ok_or_else(|| Error::BasisMismatch(format!("no tube basis morphism matches reference entry {ri}")))?;
    }
    let mut ref_compose: HashMap<(usize, usize), TubeMorphism> = HashMap::new();
    for e in &reference.compose {
        let mut m = TubeMorphism::default();
        for term in &e.terms {
            m.add_term(map[term.h], Complex64::new(term.re, term.im));
        }
        ref_compose.insert((map[e.g], map[e.f]), m);
    }
    let mut max_dev = 0.0f64;
    let n = t.basis.len();
    for g in 0..n {
        for f in 0..n {
            if !t.composable(g, f) {
                continue;
            }
            let got = t.compose_basis(g, f).unwrap();
            let want = ref_compose.remove(&(g, f)).unwrap_or_default();
            max_dev = max_dev.max(got.max_diff(&want));
        }
    }
    if let Some(stale) = ref_compose.keys().next() {
        return Err(Error::BasisMismatch(format!(
            "reference contains non-composable compose entry {stale:?}"
        )));
    }
    if let (Some(_), Some(ref_dag)) = (&t.dagger_table, &reference.dagger) {
        let mut ref_d: HashMap<usize, TubeMorphism> = HashMap::new();
        for e in ref_dag {
            let mut m = TubeMorphism::default();
            for term in &e.terms {
                m.add_term(map[term.h], Complex64::new(term.re, term.im));
            }
            ref_d.insert(map[e.f], m);
        }
        for i in 0..n {
            let got = t.dagger(&TubeMorphism::basis(i))?;
            let want = ref_d.remove(&i).unwrap_or_default();
            max_dev = max_dev.max(got.max_diff(&want));
        }
    }
    Ok(ValidationReport { pass: max_dev < 1e-10, max_residual: max_dev, messages: vec![] })
}

/// Export a tube category as a presentation (used by golden-file generation
/// and the JSON export path).
pub fn to_presentation(t: &TubeCategory) -> TubePresentation {
    let basis = t
        .basis
        .iter()
        .map(|b| PresentedBasis {
            src: t.objects[b.source].display_name.clone(),
            tgt: t.objects[b.target].display_name.clone(),
            defect: b.defect.clone(),
            channel: b.channel.clone(),
        })
        .collect();
    let mut compose: Vec<ComposeEntry> = vec![];
    let n = t.basis.len();
    for g in 0..n {
        for f in 0..n {
            if let Some(terms) = t.compose_table.get(&(g, f)) {
                if terms.is_empty() {
                    continue;
                }
                compose.push(ComposeEntry {
                    g,
                    f,
                    terms: terms
                        .iter()
                        .map(|&(h, c)| Term { h, re: c.re, im: c.im })
                        .collect(),
                });
            }
        }
    }
    let dagger = t.dagger_table.as_ref().map(|table| {
        table
            .iter()
            .enumerate()
            .map(|(f, terms)| DaggerEntry {
                f,
                terms: terms
                    .iter()
                    .map(|&(h, c)| Term { h, re: c.re, im: c.im })
                    .collect(),
            })
            .collect()
    });
    TubePresentation {
        objects: t.objects.iter().map(|o| o.display_name.clone()).collect(),
        basis,
        identities: t.identity_index.clone(),
        compose,
        dagger,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::*;

    #[test]
    fn channel_space_dims() {
        let rs3 = build_rep_s3();
        assert_eq!(channel_space_dim(&rs3, 2, 2, 2), 3);
        let fib = build_fib();
        assert_eq!(channel_space_dim(&fib, 1, 1, 1), 2);
        for cat in [&rs3, &fib] {
            for x in 0..cat.n_simples() {
                for y in 0..cat.n_simples() {
                    assert_eq!(channel_space_dim(cat, 0, x, y), usize::from(x == y));
                }
            }
        }
    }

    #[test]
    fn derived_dims_and_invariants() {
        let cases: Vec<(FusionCategoryData, usize)> = vec![
            (build_fib(), 7),
            (build_yang_lee(), 7),
            (build_rep_s3(), 17),
            (
                build_ty(&FiniteGroupTable::cyclic(2), &Bicharacter::standard_cyclic(2), 1.0 / 2f64.sqrt()).unwrap(),
                12,
            ),
            (
                build_ty(&FiniteGroupTable::cyclic(3), &Bicharacter::standard_cyclic(3), 1.0 / 3f64.sqrt()).unwrap(),
                24,
            ),
            (build_pointed(&FiniteGroupTable::s3(), &Cocycle3::trivial(6)).unwrap(), 36),
        ];
        for (cat, dim) in cases {
            let t = derive_tube(&cat).unwrap();
            assert_eq!(t.total_dim(), dim, "{}", cat.name);
            assert!(t.associativity_residual() < 1e-9, "{}", cat.name);
            assert!(t.identity_residual() < 1e-12, "{}", cat.name);
            assert!(t.dagger_residual().unwrap() < 1e-9, "{}", cat.name);
            assert!(t.algebra_view().regular_rep_faithful(), "{}", cat.name);
        }
    }

    #[test]
    fn fib_composition_examples() {
        let cat = build_fib();
        let t = derive_tube(&cat).unwrap();
        let tau = 1usize;
        // tub[τ→τ;τ;1]∘tub[τ→τ;τ;1] = φ^{-3}·tub[τ→τ;1;τ] + φ^{-2}·tub[τ→τ;τ;τ]
        let ttt1 = t.find(tau, tau, "tau", "1").unwrap();
        let out = t.compose_basis(ttt1, ttt1).unwrap();
        let idt = t.find(tau, tau, "1", "tau").unwrap();
        let tttt = t.find(tau, tau, "tau", "tau").unwrap();
        assert!((out.terms[&idt] - Complex64::new(PHI.powi(-3), 0.0)).norm() < 1e-12);
        assert!((out.terms[&tttt] - Complex64::new(PHI.powi(-2), 0.0)).norm() < 1e-12);
        // tub[1→τ;τ]∘tub[1→1;τ] = −φ^{-1}·tub[1→τ;τ]
        let t1t = t.find(0, tau, "tau", "tau").unwrap();
        let t11 = t.find(0, 0, "tau", "tau").unwrap();
        let out2 = t.compose_basis(t1t, t11).unwrap();
        assert_eq!(out2.terms.len(), 1);
        assert!((out2.terms[&t1t] - Complex64::new(-1.0 / PHI, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fib_dagger_examples() {
        let cat = build_fib();
        let t = derive_tube(&cat).unwrap();
        // tub[τ→τ;τ;1]† = φ^{-1}·tub[τ→τ;τ;1] + φ^{-1}·tub[τ→τ;τ;τ]
        let ttt1 = t.find(1, 1, "tau", "1").unwrap();
        let tttt = t.find(1, 1, "tau", "tau").unwrap();
        let d = t.dagger(&TubeMorphism::basis(ttt1)).unwrap();
        assert!((d.terms[&ttt1] - Complex64::new(1.0 / PHI, 0.0)).norm() < 1e-12);
        assert!((d.terms[&tttt] - Complex64::new(1.0 / PHI, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rep_s3_composition_example() {
        let cat = build_rep_s3();
        let t = derive_tube(&cat).unwrap();
        // tub[π→π;π;π]∘tub[π→π;π;π] = tub[π→π;π;1] − tub[π→π;π;ψ]  (corrected
        // closed form; the last coefficient is −1)
        let pp = t.find(2, 2, "pi", "pi").unwrap();
        let p1 = t.find(2, 2, "pi", "1").unwrap();
        let ppsi = t.find(2, 2, "pi", "psi").unwrap();
        let out = t.compose_basis(pp, pp).unwrap();
        assert!((out.terms[&p1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((out.terms[&ppsi] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        // dagger: tub[π→π;π;π]† = tub[π→π;π;1] − tub[π→π;π;ψ]
        let d = t.dagger(&TubeMorphism::basis(pp)).unwrap();
        assert!((d.terms[&p1] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((d.terms[&ppsi] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pointed_trivial_composition() {
        let cat = build_pointed(&FiniteGroupTable::cyclic(2), &Cocycle3::trivial(2)).unwrap();
        let t = derive_tube(&cat).unwrap();
        // g∘h → gh with coefficient 1 everywhere (trivial transgression)
        for (key, terms) in &t.compose_table {
            let _ = key;
            for &(_, c) in terms {
                assert!((c - ONE).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn yl_formal_dagger_consistent() {
        let cat = build_yang_lee();
        let t = derive_tube(&cat).unwrap();
        assert!(t.dagger_residual().unwrap() < 1e-9);
    }

    #[test]
    fn roundtrip_presentation() {
        let cat = build_fib();
        let t = derive_tube(&cat).unwrap();
        let pres = to_presentation(&t);
        let t2 = presented_tube(&pres).unwrap();
        assert_eq!(t2.provenance, Provenance::Presented);
        let rep = verify_against_reference(&t, &pres).unwrap();
        assert!(rep.pass && rep.max_residual < 1e-15);
        let rep2 = verify_against_reference(&t2, &to_presentation(&t)).unwrap();
        assert!(rep2.pass);
    }

    #[test]
    fn presented_rejects_broken_tables() {
        let cat = build_fib();
        let t = derive_tube(&cat).unwrap();
        let mut pres = to_presentation(&t);
        // corrupt one composition coefficient
        pres.compose[0].terms[0].re += 0.25;
        assert!(presented_tube(&pres).is_err());
    }
}
