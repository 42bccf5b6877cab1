//! Data model and constructors for fusion categories (unitary and, for the
//! Yang-Lee counterexample, non-unitary), with structural validators.

use crate::error::{Error, Result};
use crate::numerics::{inverse, ComplexMatrix, Tolerance};
use num_complex::Complex64;
use std::collections::BTreeMap;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A simple object of the category; id 0 is always the monoidal unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleLabel {
    pub id: usize,
    pub display_name: String,
}

/// Fusion ring: integer structure constants and the duality involution.
#[derive(Debug, Clone)]
pub struct FusionRing {
    pub n_simples: usize,
    /// coefficients[i][j][k] = N_{ij}^k
    pub coefficients: Vec<Vec<Vec<u32>>>,
    pub duals: Vec<usize>,
}

impl FusionRing {
    pub fn n(&self, i: usize, j: usize, k: usize) -> u32 {
        self.coefficients[i][j][k]
    }

    pub fn fuse(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.n_simples).filter(|&k| self.n(i, j, k) > 0).collect()
    }

    pub fn multiplicity_free(&self) -> bool {
        self.coefficients
            .iter()
            .flatten()
            .flatten()
            .all(|&n| n <= 1)
    }

    /// Unit law, exact integer associativity, dual pairing, dual involution.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_simples;
        for j in 0..n {
            for k in 0..n {
                if self.n(0, j, k) != u32::from(j == k) || self.n(j, 0, k) != u32::from(j == k) {
                    return Err(Error::Validation(format!("unit law fails at ({j},{k})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let lhs: u32 = (0..n).map(|m| self.n(i, j, m) * self.n(m, k, l)).sum();
                        let rhs: u32 = (0..n).map(|m| self.n(j, k, m) * self.n(i, m, l)).sum();
                        if lhs != rhs {
                            return Err(Error::Validation(format!(
                                "ring associativity fails at ({i},{j},{k},{l})"
                            )));
                        }
                    }
                }
                if self.n(i, j, 0) != u32::from(j == self.duals[i]) {
                    return Err(Error::Validation(format!(
                        "dual pairing fails at ({i},{j})"
                    )));
                }
            }
            if self.duals[self.duals[i]] != i {
                return Err(Error::Validation(format!("duals not involutive at {i}")));
            }
        }
        Ok(())
    }
}

/// Sparse F-symbol table keyed by admissible (a,b,c,d,e,f); the entry is the
/// associator component mediating (a⊗b)⊗c → a⊗(b⊗c) with left internal e
/// and right internal f. Multiplicity indices are implicit (always 0): every
/// builtin category is multiplicity-free.
#[derive(Debug, Clone, Default)]
pub struct FSymbolTable {
    pub entries: BTreeMap<(usize, usize, usize, usize, usize, usize), Complex64>,
}

/// Quantum dimensions d[i]; a ring homomorphism with d[0] = 1.
#[derive(Debug, Clone)]
pub struct QuantumDimensionVector {
    pub d: Vec<f64>,
}

/// Report of a structural validation pass.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub pass: bool,
    pub max_residual: f64,
    pub messages: Vec<String>,
}

impl ValidationReport {
    pub fn ok(max_residual: f64) -> Self {
        ValidationReport { pass: true, max_residual, messages: vec![] }
    }
    pub fn fail(max_residual: f64, msg: String) -> Self {
        ValidationReport { pass: false, max_residual, messages: vec![msg] }
    }
}

/// Complete data of a fusion category.
#[derive(Debug, Clone)]
pub struct FusionCategoryData {
    pub name: String,
    pub simples: Vec<SimpleLabel>,
    pub ring: FusionRing,
    pub f_symbols: Option<FSymbolTable>,
    pub dims: QuantumDimensionVector,
    pub unitary_flag: bool,
    /// Per-object scale of the tube presentation basis relative to the raw
    /// F-move normal form; composition tables are scale-invariant, the dagger
    /// and channel-basis coefficients are not. All 1 except Fibonacci/Yang-Lee,
    /// whose reference tables use the sqrt(|d|)-weighted basis.
    pub basis_weights: Vec<f64>,
}

impl FusionCategoryData {
    pub fn n_simples(&self) -> usize {
        self.ring.n_simples
    }

    pub fn n(&self, i: usize, j: usize, k: usize) -> u32 {
        self.ring.n(i, j, k)
    }

    pub fn dual(&self, i: usize) -> usize {
        self.ring.duals[i]
    }

    pub fn label_id(&self, name: &str) -> Result<usize> {
        self.simples
            .iter()
            .find(|s| s.display_name == name)
            .map(|s| s.id)
            .ok_or_else(|| Error::UnknownLabel(name.into()))
    }

    /// F-symbol component; 0 for inadmissible tuples.
    pub fn f(&self, a: usize, b: usize, c: usize, q: usize, e: usize, f: usize) -> Complex64 {
        self.f_symbols
            .as_ref()
            .and_then(|t| t.entries.get(&(a, b, c, q, e, f)).copied())
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// The F-matrix for fixed (a,b,c,q): rows over left internal labels e,
    /// columns over right internal labels f.
    pub fn f_matrix(&self, a: usize, b: usize, c: usize, q: usize) -> (Vec<usize>, Vec<usize>, ComplexMatrix) {
        let lefts: Vec<usize> = (0..self.n_simples())
            .filter(|&e| self.n(a, b, e) > 0 && self.n(e, c, q) > 0)
            .collect();
        let rights: Vec<usize> = (0..self.n_simples())
            .filter(|&f| self.n(b, c, f) > 0 && self.n(a, f, q) > 0)
            .collect();
        let m = ComplexMatrix::from_fn(lefts.len(), rights.len(), |i, j| {
            self.f(a, b, c, q, lefts[i], rights[j])
        });
        (lefts, rights, m)
    }

    /// Component of the inverse F-matrix: row f (right label), column e (left label).
    pub fn f_inv(&self, a: usize, b: usize, c: usize, q: usize, f: usize, e: usize) -> Complex64 {
        let (lefts, rights, m) = self.f_matrix(a, b, c, q);
        let (Some(fi), Some(ei)) = (
            rights.iter().position(|&x| x == f),
            lefts.iter().position(|&x| x == e),
        ) else {
            return Complex64::new(0.0, 0.0);
        };
        let inv = inverse(&m).expect("F-matrix invertible");
        inv[(fi, ei)]
    }
}

/// Validate the pentagon relation by brute force over all admissible instances.
pub fn validate_pentagon(cat: &FusionCategoryData, tol: Tolerance) -> Result<ValidationReport> {
    if cat.f_symbols.is_none() {
        return Err(Error::MissingFSymbols(cat.name.clone()));
    }
    let n = cat.n_simples();
    let mut max_res = 0.0f64;
    let mut worst = String::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for q in 0..n {
                        for e in cat.ring.fuse(a, b) {
                            for g in cat.ring.fuse(e, c) {
                                if cat.n(g, d, q) == 0 {
                                    continue;
                                }
                                for h in cat.ring.fuse(c, d) {
                                    for k in cat.ring.fuse(b, h) {
                                        if cat.n(a, k, q) == 0 {
                                            continue;
                                        }
                                        let lhs: Complex64 = cat
                                            .ring
                                            .fuse(b, c)
                                            .into_iter()
                                            .map(|f| {
                                                cat.f(a, b, c, g, e, f)
                                                    * cat.f(a, f, d, q, g, k)
                                                    * cat.f(b, c, d, k, f, h)
                                            })
                                            .sum();
                                        let rhs =
                                            cat.f(e, c, d, q, g, h) * cat.f(a, b, h, q, e, k);
                                        let res = (lhs - rhs).norm();
                                        if res > max_res {
                                            max_res = res;
                                            worst = format!(
                                                "pentagon residual {res:.3e} at (a,b,c,d;q)=({a},{b},{c},{d};{q})"
                                            );
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    if max_res < tol.abs_eps {
        Ok(ValidationReport::ok(max_res))
    } else {
        Ok(ValidationReport::fail(max_res, worst))
    }
}

/// Validate unitarity: every F-matrix unitary and all quantum dimensions positive.
pub fn validate_unitarity(cat: &FusionCategoryData, tol: Tolerance) -> Result<ValidationReport> {
    if cat.f_symbols.is_none() {
        return Err(Error::MissingFSymbols(cat.name.clone()));
    }
    let n = cat.n_simples();
    let mut max_res = 0.0f64;
    let mut messages = vec![];
    for (i, d) in cat.dims.d.iter().enumerate() {
        if *d <= 0.0 {
            messages.push(format!("quantum dimension d[{i}] = {d} is not positive"));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for q in 0..n {
                    let (lefts, rights, m) = cat.f_matrix(a, b, c, q);
                    if lefts.is_empty() || rights.is_empty() {
                        continue;
                    }
                    if lefts.len() != rights.len() {
                        messages.push(format!(
                            "non-square F-matrix at ({a},{b},{c};{q})"
                        ));
                        continue;
                    }
                    let gram = crate::numerics::conjugate_transpose(&m).mul(&m).unwrap();
                    let res = gram.max_diff(&ComplexMatrix::identity(lefts.len()));
                    if res > max_res {
                        max_res = res;
                    }
                    if res > tol.abs_eps {
                        messages.push(format!(
                            "F-matrix at ({a},{b},{c};{q}) not unitary: residual {res:.3e}"
                        ));
                    }
                }
            }
        }
    }
    Ok(ValidationReport { pass: messages.is_empty(), max_residual: max_res, messages })
}

// ---------------------------------------------------------------------------
// Group data
// ---------------------------------------------------------------------------

/// A finite group as an explicit Cayley table; identity at index 0.
#[derive(Debug, Clone)]
pub struct FiniteGroupTable {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    pub names: Vec<String>,
}

impl FiniteGroupTable {
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        if self.mul.len() != n || self.mul.iter().any(|r| r.len() != n) || self.names.len() != n {
            return Err(Error::Validation("Cayley table shape mismatch".into()));
        }
        for g in 0..n {
            if self.mul[0][g] != g || self.mul[g][0] != g {
                return Err(Error::Validation("index 0 is not the identity".into()));
            }
            if !(0..n).any(|h| self.mul[g][h] == 0) {
                return Err(Error::Validation(format!("element {g} has no inverse")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]] {
                        return Err(Error::Validation("Cayley table not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn inv(&self, g: usize) -> usize {
        (0..self.order).find(|&h| self.mul[g][h] == 0).expect("inverse")
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    /// Cyclic group Z_n with elements named "0".."n-1".
    pub fn cyclic(n: usize) -> Self {
        FiniteGroupTable {
            order: n,
            mul: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
            names: (0..n).map(|a| a.to_string()).collect(),
        }
    }

    /// Symmetric group S3 presented as rotations r^i and reflections s·r^i.
    /// Elements indexed (i, j) ↦ i + 3j with j ∈ {0,1}: (r^i, s^j).
    pub fn s3() -> Self {
        let idx = |i: usize, j: usize| i + 3 * j;
        let mut mul = vec![vec![0usize; 6]; 6];
        for i1 in 0..3 {
            for j1 in 0..2 {
                for i2 in 0..3 {
                    for j2 in 0..2 {
                        // (r^i1 s^j1)(r^i2 s^j2) = r^(i1 + (-1)^j1 i2) s^(j1+j2)
                        let i = if j1 == 0 { (i1 + i2) % 3 } else { (i1 + 3 - i2 % 3) % 3 };
                        mul[idx(i1, j1)][idx(i2, j2)] = idx(i, (j1 + j2) % 2);
                    }
                }
            }
        }
        FiniteGroupTable {
            order: 6,
            mul,
            names: vec!["1", "r", "r2", "s", "sr", "sr2"].into_iter().map(String::from).collect(),
        }
    }

    /// Klein four-group Z2 x Z2, elements (a1,a2) indexed a1 + 2*a2.
    pub fn z2z2() -> Self {
        let idx = |a: usize, b: usize| a + 2 * b;
        let mut mul = vec![vec![0usize; 4]; 4];
        for a1 in 0..2 {
            for b1 in 0..2 {
                for a2 in 0..2 {
                    for b2 in 0..2 {
                        mul[idx(a1, b1)][idx(a2, b2)] = idx((a1 + a2) % 2, (b1 + b2) % 2);
                    }
                }
            }
        }
        FiniteGroupTable {
            order: 4,
            mul,
            names: vec!["00", "10", "01", "11"].into_iter().map(String::from).collect(),
        }
    }
}

/// Normalized 3-cocycle on a finite group, as a dense table over G^3.
#[derive(Debug, Clone)]
pub struct Cocycle3 {
    pub values: Vec<Vec<Vec<Complex64>>>,
}

impl Cocycle3 {
    pub fn trivial(order: usize) -> Self {
        Cocycle3 { values: vec![vec![vec![ONE; order]; order]; order] }
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> Complex64 {
        self.values[a][b][c]
    }

    /// Brute-force closure relation and normalization check.
    pub fn validate(&self, g: &FiniteGroupTable, tol: Tolerance) -> Result<()> {
        let n = g.order;
        for a in 0..n {
            for b in 0..n {
                if (self.get(0, a, b) - ONE).norm() > tol.abs_eps
                    || (self.get(a, 0, b) - ONE).norm() > tol.abs_eps
                    || (self.get(a, b, 0) - ONE).norm() > tol.abs_eps
                {
                    return Err(Error::Validation("cocycle not normalized".into()));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        // dω(a,b,c,d) = ω(b,c,d) ω(a,bc,d) ω(a,b,c) / (ω(ab,c,d) ω(a,b,cd)) = 1
                        let lhs = self.get(b, c, d) * self.get(a, g.mul[b][c], d) * self.get(a, b, c);
                        let rhs = self.get(g.mul[a][b], c, d) * self.get(a, b, g.mul[c][d]);
                        if (lhs - rhs).norm() > tol.abs_eps {
                            return Err(Error::NotACocycle(a, b, c, d));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Symmetric bicharacter on a finite abelian group, as a dense table.
#[derive(Debug, Clone)]
pub struct Bicharacter {
    pub values: Vec<Vec<Complex64>>,
}

impl Bicharacter {
    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.values[a][b]
    }

    /// Standard bicharacter exp(2πi·ab/n) on Z_n.
    pub fn standard_cyclic(n: usize) -> Self {
        let values = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (a * b) as f64 / n as f64))
                    .collect()
            })
            .collect();
        Bicharacter { values }
    }

    pub fn validate(&self, g: &FiniteGroupTable, tol: Tolerance) -> Result<()> {
        let n = g.order;
        for a in 0..n {
            for b in 0..n {
                if (self.get(a, b) - self.get(b, a)).norm() > tol.abs_eps {
                    return Err(Error::Validation("bicharacter not symmetric".into()));
                }
                for c in 0..n {
                    let lhs = self.get(a, g.mul[b][c]);
                    let rhs = self.get(a, b) * self.get(a, c);
                    if (lhs - rhs).norm() > tol.abs_eps {
                        return Err(Error::Validation("not a bicharacter".into()));
                    }
                }
            }
        }
        // nondegeneracy: for every a != 0 there is b with chi(a,b) != 1
        for a in 1..n {
            if (0..n).all(|b| (self.get(a, b) - ONE).norm() <= tol.abs_eps) {
                return Err(Error::DegenerateBicharacter);
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

fn delta_ring(n: usize, prod: impl Fn(usize, usize) -> usize, duals: Vec<usize>) -> FusionRing {
    let coefficients = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| u32::from(prod(i, j) == k)).collect())
                .collect()
        })
        .collect();
    FusionRing { n_simples: n, coefficients, duals }
}

/// Populate the admissible F-symbol entries from a component function.
fn fill_f(ring: &FusionRing, comp: impl Fn(usize, usize, usize, usize, usize, usize) -> Complex64) -> FSymbolTable {
    let n = ring.n_simples;
    let mut entries = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for q in 0..n {
                    for e in ring.fuse(a, b) {
                        if ring.n(e, c, q) == 0 {
                            continue;
                        }
                        for f in ring.fuse(b, c) {
                            if ring.n(a, f, q) == 0 {
                                continue;
                            }
                            entries.insert((a, b, c, q, e, f), comp(a, b, c, q, e, f));
                        }
                    }
                }
            }
        }
    }
    FSymbolTable { entries }
}

/// Pointed category Hilb_G^ω: simples are group elements, F-symbols ω(g,h,k).
pub fn build_pointed(group: &FiniteGroupTable, omega: &Cocycle3) -> Result<FusionCategoryData> {
    group.validate()?;
    omega.validate(group, Tolerance::default())?;
    let n = group.order;
    let ring = delta_ring(n, |a, b| group.mul[a][b], (0..n).map(|g| group.inv(g)).collect());
    let f_symbols = fill_f(&ring, |a, b, c, _q, _e, _f| omega.get(a, b, c));
    let simples = (0..n)
        .map(|id| SimpleLabel { id, display_name: group.names[id].clone() })
        .collect();
    Ok(FusionCategoryData {
        name: "pointed".into(),
        simples,
        ring,
        f_symbols: Some(f_symbols),
        dims: QuantumDimensionVector { d: vec![1.0; n] },
        unitary_flag: true,
        basis_weights: vec![1.0; n],
    })
}

/// Tambara-Yamagami category TY_A^{χ,s}: simples A ∪ {m}, d_m = sign(s)·|A|^{1/2}.
pub fn build_ty(group: &FiniteGroupTable, chi: &Bicharacter, s: f64) -> Result<FusionCategoryData> {
    group.validate()?;
    if !group.is_abelian() {
        return Err(Error::Validation("TY group must be abelian".into()));
    }
    chi.validate(group, Tolerance::default())?;
    let na = group.order;
    if (s * s - 1.0 / na as f64).abs() > 1e-9 {
        return Err(Error::BadSquareRoot(s, na));
    }
    let m = na; // index of the non-invertible object
    let n = na + 1;
    let coefficients: Vec<Vec<Vec<u32>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| {
                            let fused = if i < na && j < na {
                                k == group.mul[i][j]
                            } else if i == m && j == m {
                                k < na
                            } else {
                                k == m
                            };
                            u32::from(fused)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut duals: Vec<usize> = (0..na).map(|g| group.inv(g)).collect();
    duals.push(m);
    let ring = FusionRing { n_simples: n, coefficients, duals };
    let f_symbols = fill_f(&ring, |a, b, c, q, e, f| {
        if a < na && b == m && c < na {
            chi.get(a, c)
        } else if a == m && b < na && c == m {
            chi.get(b, q)
        } else if a == m && b == m && c == m {
            Complex64::new(s, 0.0) * chi.get(e, f).conj()
        } else {
            ONE
        }
    });
    let mut simples: Vec<SimpleLabel> = (0..na)
        .map(|id| SimpleLabel { id, display_name: group.names[id].clone() })
        .collect();
    simples.push(SimpleLabel { id: m, display_name: "m".into() });
    let mut d = vec![1.0; na];
    d.push(s.signum() * (na as f64).sqrt());
    Ok(FusionCategoryData {
        name: "tambara-yamagami".into(),
        simples,
        ring,
        f_symbols: Some(f_symbols),
        dims: QuantumDimensionVector { d },
        unitary_flag: s > 0.0,
        basis_weights: vec![1.0; n],
    })
}

/// Rep(S3): simples 1, ψ, π with dims (1, 1, 2).
pub fn build_rep_s3() -> FusionCategoryData {
    let (u, psi, pi) = (0usize, 1usize, 2usize);
    let fuse_sets: Vec<Vec<Vec<u32>>> = {
        let mut c = vec![vec![vec![0u32; 3]; 3]; 3];
        for j in 0..3 {
            c[u][j][j] = 1;
            c[j][u][j] = 1;
        }
        c[psi][psi][u] = 1;
        c[psi][pi][pi] = 1;
        c[pi][psi][pi] = 1;
        c[pi][pi][u] = 1;
        c[pi][pi][psi] = 1;
        c[pi][pi][pi] = 1;
        c
    };
    let ring = FusionRing { n_simples: 3, coefficients: fuse_sets, duals: vec![0, 1, 2] };
    let r2 = 2f64.sqrt();
    let a_mat = |e: usize, f: usize| -> f64 {
        // rows/cols ordered (1, ψ, π)
        let v = [[1.0, 1.0, r2], [1.0, 1.0, -r2], [r2, -r2, 0.0]];
        0.5 * v[e][f]
    };
    let neg: [(usize, usize, usize, usize); 8] = [
        (psi, psi, pi, pi),
        (psi, pi, pi, u),
        (psi, pi, pi, pi),
        (pi, psi, psi, pi),
        (pi, psi, pi, pi),
        (pi, pi, psi, u),
        (pi, pi, psi, pi),
        (pi, pi, pi, psi),
    ];
    let f_symbols = fill_f(&ring, move |a, b, c, q, e, f| {
        if (a, b, c, q) == (pi, pi, pi, pi) {
            Complex64::new(a_mat(e, f), 0.0)
        } else if neg.contains(&(a, b, c, q)) {
            -ONE
        } else {
            ONE
        }
    });
    FusionCategoryData {
        name: "rep-s3".into(),
        simples: vec![
            SimpleLabel { id: 0, display_name: "1".into() },
            SimpleLabel { id: 1, display_name: "psi".into() },
            SimpleLabel { id: 2, display_name: "pi".into() },
        ],
        ring,
        f_symbols: Some(f_symbols),
        dims: QuantumDimensionVector { d: vec![1.0, 1.0, 2.0] },
        unitary_flag: true,
        basis_weights: vec![1.0; 3],
    }
}

pub const PHI: f64 = 1.618033988749894848204586834365638118;

fn build_fib_like(yang_lee: bool) -> FusionCategoryData {
    let mut c = vec![vec![vec![0u32; 2]; 2]; 2];
    c[0][0][0] = 1;
    c[0][1][1] = 1;
    c[1][0][1] = 1;
    c[1][1][0] = 1;
    c[1][1][1] = 1;
    let ring = FusionRing { n_simples: 2, coefficients: c, duals: vec![0, 1] };
    let b: [[Complex64; 2]; 2] = if yang_lee {
        [
            [Complex64::new(-PHI, 0.0), Complex64::new(0.0, PHI.sqrt())],
            [Complex64::new(0.0, PHI.sqrt()), Complex64::new(PHI, 0.0)],
        ]
    } else {
        [
            [Complex64::new(1.0 / PHI, 0.0), Complex64::new(PHI.powf(-0.5), 0.0)],
            [Complex64::new(PHI.powf(-0.5), 0.0), Complex64::new(-1.0 / PHI, 0.0)],
        ]
    };
    let f_symbols = fill_f(&ring, move |a, bb, cc, q, e, f| {
        if (a, bb, cc, q) == (1, 1, 1, 1) {
            b[e][f]
        } else {
            ONE
        }
    });
    let d_tau = if yang_lee { -1.0 / PHI } else { PHI };
    FusionCategoryData {
        name: if yang_lee { "yang-lee".into() } else { "fib".into() },
        simples: vec![
            SimpleLabel { id: 0, display_name: "1".into() },
            SimpleLabel { id: 1, display_name: "tau".into() },
        ],
        ring,
        f_symbols: Some(f_symbols),
        dims: QuantumDimensionVector { d: vec![1.0, d_tau] },
        unitary_flag: !yang_lee,
        basis_weights: vec![1.0, d_tau.abs().sqrt()],
    }
}

/// Fibonacci category: τ⊗τ = 1 ⊕ τ, d_τ = φ.
pub fn build_fib() -> FusionCategoryData {
    build_fib_like(false)
}

/// Yang-Lee category: same fusion ring, d_τ = −1/φ, non-unitary.
pub fn build_yang_lee() -> FusionCategoryData {
    build_fib_like(true)
}

/// Check that dims form a ring homomorphism with d[0] = 1.
pub fn validate_dims(cat: &FusionCategoryData, tol: Tolerance) -> Result<()> {
    let n = cat.n_simples();
    let d = &cat.dims.d;
    if (d[0] - 1.0).abs() > tol.abs_eps {
        return Err(Error::Validation("d[0] != 1".into()));
    }
    for i in 0..n {
        for j in 0..n {
            let rhs: f64 = (0..n).map(|k| cat.n(i, j, k) as f64 * d[k]).sum();
            if (d[i] * d[j] - rhs).abs() > 1e-7 {
                return Err(Error::Validation(format!(
                    "dims not a ring homomorphism at ({i},{j})"
                )));
            }
        }
    }
    Ok(())
}
