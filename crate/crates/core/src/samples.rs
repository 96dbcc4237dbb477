//! Seeded random instances: dg spaces with compatible forms, almost Hodge data, and cyclic
//! dgas assembled from small Frobenius superalgebras.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graded::{BilinearForm, DgSpace, GradedMap, GradedSpace, Parity, Symmetry};
use crate::hodge::{self, AlmostHodgeData, HodgeData};
use crate::matrix::Matrix;
use crate::multilinear::MultilinearMap;
use crate::scalar::{self, Scalar};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_int(rng: &mut SampleRng, bound: i64) -> Scalar {
    scalar::int(rng.gen_range(-bound..=bound))
}

fn nonzero_scalar(rng: &mut SampleRng) -> Scalar {
    const CHOICES: [(i64, i64); 8] = [
        (1, 1),
        (-1, 1),
        (2, 1),
        (-2, 1),
        (1, 2),
        (-1, 3),
        (3, 1),
        (2, 3),
    ];
    let (p, q) = CHOICES[rng.gen_range(0..CHOICES.len())];
    scalar::ratio(p, q)
}

fn random_parities(rng: &mut SampleRng, dim: usize) -> Vec<Parity> {
    (0..dim)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Parity::Odd
            } else {
                Parity::Even
            }
        })
        .collect()
}

/// Invertible even matrix for the space: `L U` per parity block, with random units on the diagonal.
pub fn change_of_basis(rng: &mut SampleRng, space: &GradedSpace) -> Matrix {
    let n = space.dim();
    let mut p = Matrix::zeros(n, n);
    for parity in Parity::ALL {
        let idx = space.indices_of(parity);
        let k = idx.len();
        let mut lower = Matrix::identity(k);
        let mut upper = Matrix::identity(k);
        for i in 0..k {
            upper[(i, i)] = nonzero_scalar(rng);
            for j in 0..i {
                lower[(i, j)] = small_int(rng, 2);
                upper[(j, i)] = small_int(rng, 2);
            }
        }
        let block = &lower * &upper;
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                p[(i, j)] = block[(a, b)].clone();
            }
        }
    }
    p
}

/// `P d P^{-1}` on a fresh basis of the same parities.
pub fn conjugate(v: &DgSpace, p: &Matrix) -> Result<DgSpace> {
    let inv = p
        .inverse()
        .ok_or_else(|| Error::NotInvertible("change of basis".into()))?;
    DgSpace::new(v.space().clone(), &(p * v.d().matrix()) * &inv)
}

/// Gram matrix `P^{-T} G P^{-1}`, so that `<Px, Py>' = <x, y>`.
pub fn transform_form(b: &BilinearForm, p: &Matrix) -> Result<BilinearForm> {
    let inv = p
        .inverse()
        .ok_or_else(|| Error::NotInvertible("change of basis".into()))?;
    let gram = &(&inv.transpose() * b.gram()) * &inv;
    BilinearForm::new(b.space().clone(), b.parity(), b.symmetry(), gram)
}

/// `P s P^{-1}`, `P t P^{-1}`.
pub fn transform_hodge(h: &HodgeData, v: &DgSpace, p: &Matrix) -> Result<HodgeData> {
    let inv = p
        .inverse()
        .ok_or_else(|| Error::NotInvertible("change of basis".into()))?;
    let s = &(p * h.s.matrix()) * &inv;
    let t = &(p * h.t.matrix()) * &inv;
    HodgeData::from_matrices(v, s, t, h.harmonious)
}

/// A random odd square-zero differential with `pairs` contractible pairs, in a random basis.
pub fn random_dg_space(rng: &mut SampleRng, parities: &[Parity], pairs: usize) -> Result<DgSpace> {
    let space = GradedSpace::from_parities(parities);
    let n = parities.len();
    let mut free: Vec<usize> = (0..n).collect();
    free.shuffle(rng);
    let mut d = Matrix::zeros(n, n);
    let mut made = 0;
    while made < pairs {
        let Some(x) = free.pop() else { break };
        let Some(pos) = free.iter().position(|&y| parities[y] != parities[x]) else {
            break;
        };
        let y = free.remove(pos);
        d[(y, x)] = scalar::one();
        made += 1;
    }
    let v = DgSpace::new(space.clone(), d)?;
    conjugate(&v, &change_of_basis(rng, &space))
}

/// Basis of the Gram matrices of the given parity and symmetry compatible with `d`.
pub fn compatible_forms(v: &DgSpace, parity: Parity, symmetry: Symmetry) -> Vec<Matrix> {
    let n = v.dim();
    let par = v.space().parities();
    let mut unknown = vec![vec![None; n]; n];
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            if par[i] + par[j] == parity {
                unknown[i][j] = Some(count);
                count += 1;
            }
        }
    }
    if count == 0 {
        return Vec::new();
    }
    let d = v.d().matrix();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![Scalar::zero(); count];
            for l in 0..n {
                // <d e_i, e_j> = sum_l d[l][i] g[l][j]
                if let Some(k) = unknown[l][j] {
                    row[k] += &d[(l, i)];
                }
                // (-1)^{|e_i|} <e_i, d e_j> = (-1)^{|e_i|} sum_l d[l][j] g[i][l]
                if let Some(k) = unknown[i][l] {
                    row[k] += par[i].sign().apply(d[(l, j)].clone());
                }
            }
            rows.push(row);
            if let (Some(a), Some(b)) = (unknown[i][j], unknown[j][i]) {
                let mut row = vec![Scalar::zero(); count];
                row[a] += scalar::one();
                row[b] -= (symmetry.sign() * (par[i] * par[j]).sign()).to_scalar();
                rows.push(row);
            }
        }
    }
    Matrix::from_rows(rows)
        .kernel()
        .into_iter()
        .map(|k| {
            let mut g = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    if let Some(u) = unknown[i][j] {
                        g[(i, j)] = k[u].clone();
                    }
                }
            }
            g
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Zero,
    Degenerate,
    Nondegenerate,
}

impl FormKind {
    pub const ALL: [FormKind; 3] = [
        FormKind::Zero,
        FormKind::Degenerate,
        FormKind::Nondegenerate,
    ];

    pub fn of(b: &BilinearForm) -> Self {
        if b.is_zero() {
            FormKind::Zero
        } else if b.is_nondegenerate() {
            FormKind::Nondegenerate
        } else {
            FormKind::Degenerate
        }
    }
}

/// A dg space with a compatible form.
#[derive(Clone, Debug)]
pub struct HodgeInstance {
    pub v: DgSpace,
    pub b: BilinearForm,
}

/// One instance whose form has the requested kind, retrying over fresh differentials.
/// `None` if no attempt produced that kind.
pub fn random_hodge_instance(
    rng: &mut SampleRng,
    max_dim: usize,
    parity: Parity,
    symmetry: Symmetry,
    kind: FormKind,
) -> Result<Option<HodgeInstance>> {
    for _ in 0..200 {
        let dim = rng.gen_range(1..=max_dim);
        let parities = random_parities(rng, dim);
        let even = parities.iter().filter(|p| **p == Parity::Even).count();
        let max_pairs = even.min(dim - even);
        let pairs = rng.gen_range(0..=max_pairs);
        let v = random_dg_space(rng, &parities, pairs)?;
        let basis = compatible_forms(&v, parity, symmetry);
        let gram = match kind {
            FormKind::Zero => Matrix::zeros(dim, dim),
            FormKind::Degenerate | FormKind::Nondegenerate => {
                if basis.is_empty() {
                    continue;
                }
                let take = if kind == FormKind::Degenerate {
                    rng.gen_range(1..=basis.len())
                } else {
                    basis.len()
                };
                let mut chosen: Vec<&Matrix> = basis.iter().collect();
                chosen.shuffle(rng);
                let mut g = Matrix::zeros(dim, dim);
                for m in chosen.into_iter().take(take) {
                    g = &g + &m.scale(&nonzero_scalar(rng));
                }
                g
            }
        };
        let b = BilinearForm::new(v.space().clone(), parity, symmetry, gram)?;
        if FormKind::of(&b) == kind {
            return Ok(Some(HodgeInstance { v, b }));
        }
    }
    Ok(None)
}

/// Scales `s` by `λ` and sets `t = 1 - λ(sd + ds)`. Then `s² = 0`, self-adjointness and the
/// homotopy identity survive, while `sds = s` and `dsd = d` break as soon as `d != 0`.
pub fn corrupt(h: &HodgeData, v: &DgSpace, lambda: &Scalar) -> Result<HodgeData> {
    let s = h.s.matrix().scale(lambda);
    let d = v.d().matrix();
    let t = &Matrix::identity(v.dim()) - &(&(&s * d) + &(d * &s));
    HodgeData::from_matrices(v, s, t, h.harmonious)
}

/// Orthogonal block sum of instances with genuine data whose `s` is rescaled per block,
/// moved to a random basis.
#[derive(Clone, Debug)]
pub struct AlmostInstance {
    pub v: DgSpace,
    pub b: BilinearForm,
    pub almost: AlmostHodgeData,
    pub genuine: HodgeData,
    pub scales: Vec<Scalar>,
}

pub fn random_almost_instance(rng: &mut SampleRng, max_dim: usize) -> Result<AlmostInstance> {
    let parity = if rng.gen_bool(0.5) {
        Parity::Odd
    } else {
        Parity::Even
    };
    let symmetry = if rng.gen_bool(0.5) {
        Symmetry::Antisymmetric
    } else {
        Symmetry::Symmetric
    };
    let mut blocks = Vec::new();
    let mut used = 0;
    while used < max_dim && blocks.len() < 3 {
        let kind = *FormKind::ALL.choose(rng).expect("nonempty");
        let Some(inst) =
            random_hodge_instance(rng, (max_dim - used).min(3), parity, symmetry, kind)?
        else {
            continue;
        };
        let Ok(h) = hodge::build_harmonious(&inst.v, &inst.b) else {
            continue;
        };
        used += inst.v.dim();
        blocks.push((inst, h));
        if rng.gen_bool(0.3) {
            break;
        }
    }
    let parities: Vec<Parity> = blocks
        .iter()
        .flat_map(|(i, _)| i.v.space().parities())
        .collect();
    let n = parities.len();
    let space = GradedSpace::from_parities(&parities);
    let mut d = Matrix::zeros(n, n);
    let mut g = Matrix::zeros(n, n);
    let mut s = Matrix::zeros(n, n);
    let mut s_scaled = Matrix::zeros(n, n);
    let mut t = Matrix::zeros(n, n);
    let mut scales = Vec::new();
    let mut offset = 0;
    for (inst, h) in &blocks {
        let lambda = nonzero_scalar(rng);
        let k = inst.v.dim();
        for i in 0..k {
            for j in 0..k {
                d[(offset + i, offset + j)] = inst.v.d().matrix()[(i, j)].clone();
                g[(offset + i, offset + j)] = inst.b.gram()[(i, j)].clone();
                s[(offset + i, offset + j)] = h.s.matrix()[(i, j)].clone();
                s_scaled[(offset + i, offset + j)] = &h.s.matrix()[(i, j)] * &lambda;
                t[(offset + i, offset + j)] = h.t.matrix()[(i, j)].clone();
            }
        }
        scales.push(lambda);
        offset += k;
    }
    let v = DgSpace::new(space.clone(), d)?;
    let b = BilinearForm::new(space.clone(), parity, symmetry, g)?;
    let genuine = HodgeData::from_matrices(&v, s, t.clone(), true)?;
    let scaled = HodgeData::from_matrices(&v, s_scaled, t, true)?;

    let p = change_of_basis(rng, &space);
    let v2 = conjugate(&v, &p)?;
    let b2 = transform_form(&b, &p)?;
    let genuine = transform_hodge(&genuine, &v2, &p)?;
    let scaled = transform_hodge(&scaled, &v2, &p)?;
    Ok(AlmostInstance {
        v: v2,
        b: b2,
        almost: AlmostHodgeData::new(scaled.s, scaled.t)?,
        genuine,
        scales,
    })
}

/// A differential graded superalgebra: a dg space with an even associative product for which
/// `d` is a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dga {
    pub name: String,
    pub v: DgSpace,
    pub product: MultilinearMap,
}

fn build_dga(
    name: &str,
    parities: &[Parity],
    table: &[(usize, usize, usize, i64)],
    d: &[(usize, usize, i64)],
) -> Dga {
    let space = GradedSpace::from_parities(parities);
    let mut product = MultilinearMap::zero_on(&space, 2, Parity::Even);
    for &(a, b, o, c) in table {
        product
            .add_entry(vec![a, b], o, scalar::int(c))
            .expect("homogeneous table");
    }
    let mut dm = Matrix::zeros(parities.len(), parities.len());
    for &(row, col, c) in d {
        dm[(row, col)] = scalar::int(c);
    }
    Dga {
        name: name.to_string(),
        v: DgSpace::new(space, dm).expect("square-zero differential"),
        product,
    }
}

impl Dga {
    /// The ground field.
    pub fn ground() -> Self {
        build_dga("k", &[Parity::Even], &[(0, 0, 0, 1)], &[])
    }

    /// `k[x]/(x^m)`, basis `1, x, ..., x^{m-1}`.
    pub fn truncated(m: usize) -> Self {
        let mut table = Vec::new();
        for a in 0..m {
            for b in 0..m - a {
                table.push((a, b, a + b, 1));
            }
        }
        build_dga(&format!("k[x]/x^{m}"), &vec![Parity::Even; m], &table, &[])
    }

    /// `Λ(ξ)`, basis `1, ξ`; with `dξ = 1` when `acyclic`.
    pub fn exterior(acyclic: bool) -> Self {
        let d: &[(usize, usize, i64)] = if acyclic { &[(0, 1, 1)] } else { &[] };
        let name = if acyclic { "Λ(ξ), dξ=1" } else { "Λ(ξ)" };
        build_dga(
            name,
            &[Parity::Even, Parity::Odd],
            &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)],
            d,
        )
    }

    /// Clifford algebra on one odd generator, `e² = 1`.
    pub fn clifford() -> Self {
        build_dga(
            "Cl_1",
            &[Parity::Even, Parity::Odd],
            &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 0, 1)],
            &[],
        )
    }

    /// `k[x]/(x²) ⊗ Λ(ξ)` with `dξ = x`, basis `1, x, ξ, xξ`.
    pub fn koszul_pair() -> Self {
        let table = [
            (0, 0, 0, 1),
            (0, 1, 1, 1),
            (1, 0, 1, 1),
            (0, 2, 2, 1),
            (2, 0, 2, 1),
            (0, 3, 3, 1),
            (3, 0, 3, 1),
            (1, 2, 3, 1),
            (2, 1, 3, 1),
        ];
        build_dga(
            "k[x]/x^2 ⊗ Λ(ξ), dξ=x",
            &[Parity::Even, Parity::Even, Parity::Odd, Parity::Odd],
            &table,
            &[(1, 2, 1)],
        )
    }

    /// `M(1|1)` with basis `E11, E22, E12, E21` and `d = [E12, -]`.
    pub fn matrix_superalgebra() -> Self {
        // E_ij E_kl = δ_jk E_il
        let idx = |i: usize, j: usize| match (i, j) {
            (1, 1) => 0,
            (2, 2) => 1,
            (1, 2) => 2,
            _ => 3,
        };
        let mut table = Vec::new();
        for (i, j) in [(1, 1), (2, 2), (1, 2), (2, 1)] {
            for (k, l) in [(1, 1), (2, 2), (1, 2), (2, 1)] {
                if j == k {
                    table.push((idx(i, j), idx(k, l), idx(i, l), 1));
                }
            }
        }
        // [E12, a] = E12 a - (-1)^{|a|} a E12
        let d = [(2, 0, -1), (2, 1, 1), (0, 3, 1), (1, 3, 1)];
        build_dga(
            "M(1|1), d=[E12,-]",
            &[Parity::Even, Parity::Even, Parity::Odd, Parity::Odd],
            &table,
            &d,
        )
    }

    /// Upper triangular part of `M(1|1)`, basis `E11, E22, E12`, `d = [E12, -]`. Its supertrace
    /// form has radical `im d`, which has no d-stable complement.
    pub fn upper_triangular() -> Self {
        let table = [(0, 0, 0, 1), (1, 1, 1, 1), (0, 2, 2, 1), (2, 1, 2, 1)];
        build_dga(
            "upper M(1|1), d=[E12,-]",
            &[Parity::Even, Parity::Even, Parity::Odd],
            &table,
            &[(2, 0, -1), (2, 1, 1)],
        )
    }

    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    /// Graded tensor product: `(a ⊗ b)(a' ⊗ b') = (-1)^{|b||a'|} aa' ⊗ bb'` and
    /// `d(a ⊗ b) = da ⊗ b + (-1)^{|a|} a ⊗ db`. Basis index `i * dim(other) + j`.
    pub fn tensor(&self, other: &Dga) -> Dga {
        let (n, m) = (self.dim(), other.dim());
        let pa = self.v.space().parities();
        let pb = other.v.space().parities();
        let parities: Vec<Parity> = (0..n * m).map(|k| pa[k / m] + pb[k % m]).collect();
        let space = GradedSpace::from_parities(&parities);
        let mut product = MultilinearMap::zero_on(&space, 2, Parity::Even);
        for (ia, oa, ca) in self.product.iter() {
            for (ib, ob, cb) in other.product.iter() {
                let sign = (pb[ib[0]] * pa[ia[1]]).sign();
                let c = sign.apply(ca * cb);
                product
                    .add_entry(vec![ia[0] * m + ib[0], ia[1] * m + ib[1]], oa * m + ob, c)
                    .expect("homogeneous");
            }
        }
        let da = self.v.d().matrix();
        let db = other.v.d().matrix();
        let mut d = Matrix::zeros(n * m, n * m);
        for a in 0..n {
            for b in 0..m {
                for r in 0..n {
                    d[(r * m + b, a * m + b)] += &da[(r, a)];
                }
                for r in 0..m {
                    d[(a * m + r, a * m + b)] += pa[a].sign().apply(db[(r, b)].clone());
                }
            }
        }
        Dga {
            name: format!("({}) ⊗ ({})", self.name, other.name),
            v: DgSpace::new(space, d).expect("tensor differential squares to zero"),
            product,
        }
    }

    /// Direct product of algebras, basis of `self` first.
    pub fn direct_product(&self, other: &Dga) -> Dga {
        let n = self.dim();
        let mut parities = self.v.space().parities();
        parities.extend(other.v.space().parities());
        let space = GradedSpace::from_parities(&parities);
        let mut product = MultilinearMap::zero_on(&space, 2, Parity::Even);
        for (i, o, c) in self.product.iter() {
            product
                .add_entry(i.to_vec(), o, c.clone())
                .expect("homogeneous");
        }
        for (i, o, c) in other.product.iter() {
            product
                .add_entry(vec![i[0] + n, i[1] + n], o + n, c.clone())
                .expect("homogeneous");
        }
        let total = parities.len();
        let mut d = Matrix::zeros(total, total);
        for (src, off) in [(self, 0), (other, n)] {
            let m = src.v.d().matrix();
            for i in 0..src.dim() {
                for j in 0..src.dim() {
                    d[(off + i, off + j)] = m[(i, j)].clone();
                }
            }
        }
        Dga {
            name: format!("({}) × ({})", self.name, other.name),
            v: DgSpace::new(space, d).expect("block differential squares to zero"),
            product,
        }
    }

    /// Structure constants and differential in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<Dga> {
        let inv = p
            .inverse()
            .ok_or_else(|| Error::NotInvertible("change of basis".into()))?;
        let space = self.v.space();
        let p_map = GradedMap::endo(space, Parity::Even, p.clone())?;
        let inv_map = GradedMap::endo(space, Parity::Even, inv)?;
        let product = self
            .product
            .precompose_all(&p_map)?
            .post_compose(&inv_map)?;
        let d = &(inv_map.matrix() * self.v.d().matrix()) * p;
        Ok(Dga {
            name: self.name.clone(),
            v: DgSpace::new(space.clone(), d)?,
            product,
        })
    }

    /// Linear functionals `τ` of the given parity with `τ(dx) = 0` and `τ(ab) = (-1)^{|a||b|} τ(ba)`.
    pub fn graded_traces(&self, parity: Parity) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let space = self.v.space();
        let cols = space.indices_of(parity);
        if cols.is_empty() {
            return Vec::new();
        }
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        let d = self.v.d().matrix();
        for x in 0..n {
            rows.push(cols.iter().map(|&c| d[(c, x)].clone()).collect());
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.product.apply_basis(&[a, b]);
                let ba = self.product.apply_basis(&[b, a]);
                let sign = (space.parity(a) * space.parity(b)).sign();
                rows.push(
                    cols.iter()
                        .map(|c| {
                            let x = ab.get(c).cloned().unwrap_or_else(Scalar::zero);
                            let y = ba.get(c).cloned().unwrap_or_else(Scalar::zero);
                            x - sign.apply(y)
                        })
                        .collect(),
                );
            }
        }
        Matrix::from_rows(rows)
            .kernel()
            .into_iter()
            .map(|k| {
                let mut tau = vec![Scalar::zero(); n];
                for (&c, x) in cols.iter().zip(k) {
                    tau[c] = x;
                }
                tau
            })
            .collect()
    }

    /// `<a, b> = τ(ab)`.
    pub fn trace_form(&self, tau: &[Scalar], parity: Parity) -> Result<BilinearForm> {
        let n = self.dim();
        let mut g = Matrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                g[(a, b)] = self
                    .product
                    .apply_basis(&[a, b])
                    .iter()
                    .map(|(o, c)| c * &tau[*o])
                    .sum();
            }
        }
        BilinearForm::new(self.v.space().clone(), parity, Symmetry::Symmetric, g)
    }
}

#[derive(Clone, Debug)]
pub struct CyclicDga {
    pub dga: Dga,
    pub form: BilinearForm,
}

fn base_algebras() -> Vec<Dga> {
    vec![
        Dga::ground(),
        Dga::exterior(false),
        Dga::exterior(true),
        Dga::clifford(),
        Dga::truncated(2),
        Dga::truncated(3),
        Dga::koszul_pair(),
        Dga::matrix_superalgebra(),
        Dga::upper_triangular(),
    ]
}

/// A random cyclic dga of dimension `<= max_dim`, built from tensor and direct products of small
/// algebras, with a random trace form in a random basis.
pub fn random_cyclic_dga(rng: &mut SampleRng, max_dim: usize) -> Result<CyclicDga> {
    let bases = base_algebras();
    let mut dga = loop {
        let first = bases.choose(rng).expect("nonempty").clone();
        if first.dim() <= max_dim {
            break first;
        }
    };
    for _ in 0..2 {
        if !rng.gen_bool(0.5) {
            continue;
        }
        let other = bases.choose(rng).expect("nonempty");
        if rng.gen_bool(0.5) && dga.dim() * other.dim() <= max_dim {
            dga = dga.tensor(other);
        } else if dga.dim() + other.dim() <= max_dim {
            dga = dga.direct_product(other);
        }
    }
    if rng.gen_bool(0.2) && dga.dim() < max_dim {
        dga = dga.direct_product(&Dga::truncated(max_dim - dga.dim()));
    }

    let parities: Vec<Parity> = Parity::ALL
        .into_iter()
        .filter(|&p| !dga.graded_traces(p).is_empty())
        .collect();
    let parity = parities.choose(rng).copied().unwrap_or(Parity::Even);
    let traces = dga.graded_traces(parity);
    let mut tau = vec![Scalar::zero(); dga.dim()];
    for t in &traces {
        let c = small_int(rng, 2);
        for (x, y) in tau.iter_mut().zip(t) {
            *x += &c * y;
        }
    }
    if tau.iter().all(Zero::is_zero) {
        if let Some(t) = traces.first() {
            tau = t.clone();
        }
    }
    let p = change_of_basis(rng, dga.v.space());
    let dga = dga.change_basis(&p)?;
    let form = transform_trace(&dga, &tau, &p, parity)?;
    Ok(CyclicDga { dga, form })
}

/// The trace `τ` moves with the basis: `τ'(e'_j) = τ(p e_j)`.
fn transform_trace(dga: &Dga, tau: &[Scalar], p: &Matrix, parity: Parity) -> Result<BilinearForm> {
    let moved: Vec<Scalar> = (0..dga.dim())
        .map(|j| (0..dga.dim()).map(|i| &p[(i, j)] * &tau[i]).sum())
        .collect();
    dga.trace_form(&moved, parity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::{check_cyclic, check_form, check_stasheff, AInfinityStructure};

    fn is_cyclic_dga(c: &CyclicDga) -> bool {
        let a = AInfinityStructure::from_dga(c.dga.v.clone(), &c.dga.product, 3).unwrap();
        check_form(&c.dga.v, &c.form).unwrap().passes()
            && check_stasheff(&a).unwrap().passes()
            && check_cyclic(&a, &c.form).unwrap().passes()
    }

    #[test]
    fn base_algebras_are_dgas() {
        for dga in base_algebras() {
            let a = AInfinityStructure::from_dga(dga.v.clone(), &dga.product, 3).unwrap();
            assert!(check_stasheff(&a).unwrap().passes(), "{}", dga.name);
        }
    }

    #[test]
    fn products_are_dgas() {
        let bases = base_algebras();
        for x in &bases {
            for y in &bases {
                for dga in [x.tensor(y), x.direct_product(y)] {
                    if dga.dim() > 6 {
                        continue;
                    }
                    let a = AInfinityStructure::from_dga(dga.v.clone(), &dga.product, 3).unwrap();
                    assert!(check_stasheff(&a).unwrap().passes(), "{}", dga.name);
                }
            }
        }
    }

    #[test]
    fn matrix_superalgebra_trace_is_the_supertrace() {
        let m = Dga::matrix_superalgebra();
        let traces = m.graded_traces(Parity::Even);
        assert_eq!(traces.len(), 1);
        assert_eq!(traces[0][0], -traces[0][1].clone());
        assert!(m.graded_traces(Parity::Odd).is_empty());
    }

    #[test]
    fn upper_triangular_is_obstructed() {
        let u = Dga::upper_triangular();
        assert_eq!(u.graded_traces(Parity::Even).len(), 2);
        let b = u
            .trace_form(
                &[scalar::int(1), scalar::int(-1), scalar::int(0)],
                Parity::Even,
            )
            .unwrap();
        assert!(matches!(
            hodge::build_harmonious(&u.v, &b),
            Err(Error::NoDgComplement(_))
        ));
    }

    #[test]
    fn random_cyclic_dgas_are_cyclic() {
        let mut r = rng(7);
        for _ in 0..20 {
            let c = random_cyclic_dga(&mut r, 5).unwrap();
            assert!(c.dga.dim() <= 5);
            assert!(is_cyclic_dga(&c), "{}", c.dga.name);
        }
    }

    #[test]
    fn random_forms_are_compatible() {
        let mut r = rng(3);
        for k in 0..24 {
            let parity = Parity::from_bit((k % 2) as u8).unwrap();
            let symmetry = if k % 4 < 2 {
                Symmetry::Symmetric
            } else {
                Symmetry::Antisymmetric
            };
            let kind = FormKind::ALL[k / 8];
            let inst = random_hodge_instance(&mut r, 6, parity, symmetry, kind)
                .unwrap()
                .unwrap();
            assert!(check_form(&inst.v, &inst.b).unwrap().passes());
            assert_eq!(FormKind::of(&inst.b), kind);
        }
    }

    #[test]
    fn almost_instance_scales_genuine_data() {
        let mut r = rng(11);
        let inst = random_almost_instance(&mut r, 6).unwrap();
        let report = hodge::verify(&inst.genuine, &inst.v, &inst.b).unwrap();
        assert!(report.passes());
        assert!(inst.almost.check(&inst.v, &inst.b).unwrap().invertible);
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_cyclic_dga(&mut rng(5), 5).unwrap();
        let b = random_cyclic_dga(&mut rng(5), 5).unwrap();
        assert_eq!(a.dga, b.dga);
        assert_eq!(a.form, b.form);
    }
}
