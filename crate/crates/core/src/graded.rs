//! Z/2-graded vector spaces, homogeneous maps, subspaces, dg spaces and bilinear forms.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{self, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub const ALL: [Parity; 2] = [Parity::Even, Parity::Odd];

    pub fn from_bit(bit: u8) -> Option<Self> {
        match bit {
            0 => Some(Parity::Even),
            1 => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^self`.
    pub fn sign(self) -> Sign {
        match self {
            Parity::Even => Sign::Plus,
            Parity::Odd => Sign::Minus,
        }
    }

    pub fn sum<I: IntoIterator<Item = Parity>>(iter: I) -> Parity {
        iter.into_iter().fold(Parity::Even, |a, b| a + b)
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Product of parities, i.e. the exponent in a Koszul sign `(-1)^{|a||b|}`.
impl Mul for Parity {
    type Output = Parity;
    fn mul(self, rhs: Parity) -> Parity {
        if self.is_odd() && rhs.is_odd() {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

impl Serialize for Parity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.bit())
    }
}

impl<'de> Deserialize<'de> for Parity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bit = u8::deserialize(d)?;
        Parity::from_bit(bit)
            .ok_or_else(|| serde::de::Error::custom(format!("parity must be 0 or 1, got {bit}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn apply(self, x: Scalar) -> Scalar {
        match self {
            Sign::Plus => x,
            Sign::Minus => -x,
        }
    }

    pub fn to_scalar(self) -> Scalar {
        self.apply(Scalar::one())
    }

    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i8(s: i8) -> Option<Sign> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisVector {
    pub name: String,
    pub parity: Parity,
}

/// A finite-dimensional super vector space given by an ordered homogeneous basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    basis: Vec<BasisVector>,
}

impl GradedSpace {
    pub fn new(basis: Vec<BasisVector>) -> Result<Self> {
        let mut seen = HashSet::new();
        for b in &basis {
            if !seen.insert(b.name.as_str()) {
                return Err(Error::DuplicateBasisName(b.name.clone()));
            }
        }
        Ok(Self { basis })
    }

    /// Basis named `e0, e1, ...` with the given parities.
    pub fn from_parities(parities: &[Parity]) -> Self {
        Self::with_prefix("e", parities)
    }

    pub fn with_prefix(prefix: &str, parities: &[Parity]) -> Self {
        let basis = parities
            .iter()
            .enumerate()
            .map(|(i, &parity)| BasisVector {
                name: format!("{prefix}{i}"),
                parity,
            })
            .collect();
        Self { basis }
    }

    pub fn zero() -> Self {
        Self { basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.basis[i].parity
    }

    pub fn parities(&self) -> Vec<Parity> {
        self.basis.iter().map(|b| b.parity).collect()
    }

    pub fn indices_of(&self, parity: Parity) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.parity(i) == parity)
            .collect()
    }

    /// Dimensions of the even and odd parts.
    pub fn superdim(&self) -> (usize, usize) {
        let even = self.indices_of(Parity::Even).len();
        (even, self.dim() - even)
    }

    /// The parity reversion: same names, every parity flipped.
    pub fn reversed(&self) -> Self {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisVector {
                name: b.name.clone(),
                parity: b.parity.flip(),
            })
            .collect();
        Self { basis }
    }

    /// Parity of a vector, `None` for the zero vector.
    pub fn vector_parity(&self, v: &[Scalar]) -> Result<Option<Parity>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let mut found = None;
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match found {
                None => found = Some(self.parity(i)),
                Some(p) if p != self.parity(i) => return Err(Error::InhomogeneousVector),
                _ => {}
            }
        }
        Ok(found)
    }

    pub fn unit(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[i] = Scalar::one();
        v
    }
}

/// A homogeneous vector, the unit of input for [`slot_apply`](crate::multilinear::slot_apply).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVector {
    pub parity: Parity,
    pub coords: Vec<Scalar>,
}

impl GradedVector {
    pub fn new(space: &GradedSpace, coords: Vec<Scalar>, parity_if_zero: Parity) -> Result<Self> {
        let parity = space.vector_parity(&coords)?.unwrap_or(parity_if_zero);
        Ok(Self { parity, coords })
    }

    pub fn basis(space: &GradedSpace, i: usize) -> Self {
        Self {
            parity: space.parity(i),
            coords: space.unit(i),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// A homogeneous linear map stored as a dense `target.dim() x source.dim()` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedSpace,
    target: GradedSpace,
    parity: Parity,
    matrix: Matrix,
}

impl GradedMap {
    pub fn new(
        source: GradedSpace,
        target: GradedSpace,
        parity: Parity,
        matrix: Matrix,
    ) -> Result<Self> {
        if matrix.rows() != target.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim(),
                found: matrix.rows(),
            });
        }
        if matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch {
                expected: source.dim(),
                found: matrix.cols(),
            });
        }
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                if !matrix[(i, j)].is_zero() && target.parity(i) != source.parity(j) + parity {
                    return Err(Error::NotHomogeneous {
                        row: i,
                        col: j,
                        parity,
                    });
                }
            }
        }
        Ok(Self {
            source,
            target,
            parity,
            matrix,
        })
    }

    /// Endomorphism of `space`.
    pub fn endo(space: &GradedSpace, parity: Parity, matrix: Matrix) -> Result<Self> {
        Self::new(space.clone(), space.clone(), parity, matrix)
    }

    pub fn identity(space: &GradedSpace) -> Self {
        Self {
            source: space.clone(),
            target: space.clone(),
            parity: Parity::Even,
            matrix: Matrix::identity(space.dim()),
        }
    }

    pub fn zero(source: &GradedSpace, target: &GradedSpace, parity: Parity) -> Self {
        Self {
            source: source.clone(),
            target: target.clone(),
            parity,
            matrix: Matrix::zeros(target.dim(), source.dim()),
        }
    }

    pub fn source(&self) -> &GradedSpace {
        &self.source
    }

    pub fn target(&self) -> &GradedSpace {
        &self.target
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(v)
    }

    /// The same coordinates viewed as a map between the parity-reversed spaces.
    pub fn on_reversed(&self) -> Self {
        Self {
            source: self.source.reversed(),
            target: self.target.reversed(),
            parity: self.parity,
            matrix: self.matrix.clone(),
        }
    }
}

/// `g ∘ f`.
pub fn compose(g: &GradedMap, f: &GradedMap) -> Result<GradedMap> {
    if f.target != g.source {
        return Err(Error::SpaceMismatch(
            "target of the inner map differs from source of the outer map".into(),
        ));
    }
    Ok(GradedMap {
        source: f.source.clone(),
        target: g.target.clone(),
        parity: f.parity + g.parity,
        matrix: &g.matrix * &f.matrix,
    })
}

/// A subspace spanned by linearly independent homogeneous vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: GradedSpace,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    /// Requires the vectors to be homogeneous and independent.
    pub fn new(ambient: GradedSpace, basis: Vec<Vec<Scalar>>) -> Result<Self> {
        for v in &basis {
            if ambient.vector_parity(v)?.is_none() {
                return Err(Error::InvalidDecomposition(
                    "zero vector in a subspace basis".into(),
                ));
            }
        }
        if !matrix::independent(ambient.dim(), &basis) {
            return Err(Error::InvalidDecomposition(
                "subspace basis is linearly dependent".into(),
            ));
        }
        Ok(Self { ambient, basis })
    }

    /// Span of arbitrary vectors, keeping the first independent ones. Every vector must be
    /// homogeneous (zero vectors are skipped).
    pub fn span(ambient: &GradedSpace, vectors: &[Vec<Scalar>]) -> Result<Self> {
        for v in vectors {
            ambient.vector_parity(v)?;
        }
        let keep = matrix::extend_basis(ambient.dim(), &[], vectors);
        Ok(Self {
            ambient: ambient.clone(),
            basis: keep.into_iter().map(|k| vectors[k].clone()).collect(),
        })
    }

    pub fn zero(ambient: &GradedSpace) -> Self {
        Self {
            ambient: ambient.clone(),
            basis: Vec::new(),
        }
    }

    pub fn whole(ambient: &GradedSpace) -> Self {
        Self {
            ambient: ambient.clone(),
            basis: (0..ambient.dim()).map(|i| ambient.unit(i)).collect(),
        }
    }

    /// Column space of a homogeneous map, computed parity by parity so that the basis is homogeneous.
    pub fn image_of(map: &GradedMap) -> Self {
        let mut basis = Vec::new();
        for p in Parity::ALL {
            let cols = map.source().indices_of(p);
            let rows: Vec<usize> = (0..map.target().dim()).collect();
            let block = map.matrix().select(&rows, &cols);
            basis.extend(block.image());
        }
        Self {
            ambient: map.target().clone(),
            basis,
        }
    }

    /// Null space of a homogeneous map, parity by parity.
    pub fn kernel_of(map: &GradedMap) -> Self {
        let source = map.source();
        let mut basis = Vec::new();
        for p in Parity::ALL {
            let cols = source.indices_of(p);
            let rows: Vec<usize> = (0..map.target().dim()).collect();
            let block = map.matrix().select(&rows, &cols);
            for k in block.kernel() {
                let mut v = vec![Scalar::zero(); source.dim()];
                for (x, &c) in k.into_iter().zip(&cols) {
                    v[c] = x;
                }
                basis.push(v);
            }
        }
        Self {
            ambient: source.clone(),
            basis,
        }
    }

    /// Common null space of the linear functionals given as rows, parity by parity.
    pub fn annihilator(ambient: &GradedSpace, functionals: &Matrix) -> Self {
        let source = GradedMap {
            source: ambient.clone(),
            target: GradedSpace::from_parities(&vec![Parity::Even; functionals.rows()]),
            parity: Parity::Even,
            matrix: functionals.clone(),
        };
        Self::kernel_of(&source)
    }

    pub fn ambient(&self) -> &GradedSpace {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    /// Basis vectors as the columns of an `ambient.dim() x dim` matrix.
    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient.dim(), &self.basis)
    }

    pub fn parities(&self) -> Vec<Parity> {
        self.basis
            .iter()
            .map(|v| {
                self.ambient
                    .vector_parity(v)
                    .ok()
                    .flatten()
                    .expect("subspace basis is homogeneous and nonzero")
            })
            .collect()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.matrix().solve(v).is_some()
    }

    /// Coordinates of `v` in this basis.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        self.matrix().solve(v)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Equality as subspaces (not as bases).
    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    /// Internal sum, keeping this basis and appending independent vectors of `other`.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        let extra = matrix::extend_basis(self.ambient.dim(), &self.basis, &other.basis);
        let mut basis = self.basis.clone();
        basis.extend(extra.into_iter().map(|k| other.basis[k].clone()));
        Subspace {
            ambient: self.ambient.clone(),
            basis,
        }
    }

    /// Concatenation of bases; fails unless the sum is direct.
    pub fn direct_sum(&self, other: &Subspace) -> Result<Subspace> {
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        if !matrix::independent(self.ambient.dim(), &basis) {
            return Err(Error::InvalidDecomposition(
                "sum of subspaces is not direct".into(),
            ));
        }
        Ok(Subspace {
            ambient: self.ambient.clone(),
            basis,
        })
    }

    /// Image of the subspace under a map, as a spanning set (not reduced).
    pub fn mapped(&self, map: &GradedMap) -> Vec<Vec<Scalar>> {
        self.basis.iter().map(|v| map.apply(v)).collect()
    }

    /// Greedy complement inside `whole`: the vectors of `whole`'s basis not already spanned.
    pub fn complement_within(&self, whole: &Subspace) -> Subspace {
        let extra = matrix::extend_basis(self.ambient.dim(), &self.basis, &whole.basis);
        Subspace {
            ambient: self.ambient.clone(),
            basis: extra.into_iter().map(|k| whole.basis[k].clone()).collect(),
        }
    }
}

/// A super vector space with an odd square-zero differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgSpace {
    space: GradedSpace,
    d: GradedMap,
}

impl DgSpace {
    pub fn new(space: GradedSpace, d: Matrix) -> Result<Self> {
        let d = GradedMap::endo(&space, Parity::Odd, d)?;
        if !(d.matrix() * d.matrix()).is_zero() {
            return Err(Error::DifferentialNotSquareZero);
        }
        Ok(Self { space, d })
    }

    pub fn with_zero_differential(space: GradedSpace) -> Self {
        let d = GradedMap::zero(&space, &space, Parity::Odd);
        Self { space, d }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn d(&self) -> &GradedMap {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Restriction to a d-stable subspace, in the coordinates of the subspace basis.
    pub fn restrict(&self, sub: &Subspace) -> Result<DgSpace> {
        let basis = sub.matrix();
        let image = self.d.matrix() * &basis;
        let local = basis
            .solve_matrix(&image)
            .ok_or_else(|| Error::Precondition("subspace is not stable under d".into()))?;
        DgSpace::new(GradedSpace::from_parities(&sub.parities()), local)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    /// Dimensions of the even and odd homology.
    pub betti: (usize, usize),
    pub representatives: Subspace,
    pub boundaries: Subspace,
    pub cycles: Subspace,
}

/// Cycles, boundaries, and representatives complementing the boundaries inside the cycles
/// (first available cycle basis vectors, in order).
pub fn homology(v: &DgSpace) -> Homology {
    let boundaries = Subspace::image_of(v.d());
    let kernel = Subspace::kernel_of(v.d());
    let representatives = boundaries.complement_within(&kernel);
    let cycles = boundaries
        .direct_sum(&representatives)
        .expect("representatives complement the boundaries");
    let even = representatives
        .parities()
        .iter()
        .filter(|p| **p == Parity::Even)
        .count();
    Homology {
        betti: (even, representatives.dim() - even),
        representatives,
        boundaries,
        cycles,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

impl Symmetry {
    pub fn sign(self) -> Sign {
        match self {
            Symmetry::Symmetric => Sign::Plus,
            Symmetry::Antisymmetric => Sign::Minus,
        }
    }

    pub fn from_i8(s: i8) -> Option<Self> {
        match s {
            1 => Some(Symmetry::Symmetric),
            -1 => Some(Symmetry::Antisymmetric),
            _ => None,
        }
    }
}

/// A homogeneous bilinear form with Gram matrix `entries[(i, j)] = <e_i, e_j>`.
///
/// Construction enforces `<x, y> = ±(-1)^{|x||y|} <y, x>` and the parity constraint,
/// but not compatibility with a differential (see [`check_form`](crate::ainfty::check_form)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearForm {
    space: GradedSpace,
    parity: Parity,
    symmetry: Symmetry,
    gram: Matrix,
}

impl BilinearForm {
    pub fn new(
        space: GradedSpace,
        parity: Parity,
        symmetry: Symmetry,
        gram: Matrix,
    ) -> Result<Self> {
        let form = Self::new_unchecked(space, parity, symmetry, gram)?;
        if let Some((i, j)) = form.parity_violation() {
            return Err(Error::InvalidForm(format!(
                "entry ({i}, {j}) is nonzero but breaks the form parity"
            )));
        }
        if let Some((i, j)) = form.symmetry_violation() {
            return Err(Error::InvalidForm(format!(
                "entries ({i}, {j}) and ({j}, {i}) break the symmetry rule"
            )));
        }
        Ok(form)
    }

    /// Only checks shapes; used to report on forms that break the symmetry rule.
    pub fn new_unchecked(
        space: GradedSpace,
        parity: Parity,
        symmetry: Symmetry,
        gram: Matrix,
    ) -> Result<Self> {
        if gram.rows() != space.dim() || gram.cols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: gram.rows().max(gram.cols()),
            });
        }
        Ok(Self {
            space,
            parity,
            symmetry,
            gram,
        })
    }

    pub fn zero(space: &GradedSpace) -> Self {
        Self {
            space: space.clone(),
            parity: Parity::Even,
            symmetry: Symmetry::Symmetric,
            gram: Matrix::zeros(space.dim(), space.dim()),
        }
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let gy = self.gram.mul_vec(y);
        x.iter()
            .zip(&gy)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.gram.is_zero()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.rank() == self.space.dim()
    }

    /// First `(i, j)` with a nonzero entry although `|e_i| + |e_j|` differs from the form parity.
    pub fn parity_violation(&self) -> Option<(usize, usize)> {
        let n = self.space.dim();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| {
                !self.gram[(i, j)].is_zero()
                    && self.space.parity(i) + self.space.parity(j) != self.parity
            })
    }

    /// First `(i, j)` where `<e_i, e_j> != ±(-1)^{|e_i||e_j|} <e_j, e_i>`.
    pub fn symmetry_violation(&self) -> Option<(usize, usize)> {
        let n = self.space.dim();
        for i in 0..n {
            for j in i..n {
                let koszul = (self.space.parity(i) * self.space.parity(j)).sign();
                let expected = (self.symmetry.sign() * koszul).apply(self.gram[(j, i)].clone());
                if self.gram[(i, j)] != expected {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Gram matrix of the restriction to a subspace, in the subspace basis.
    pub fn restrict(&self, sub: &Subspace) -> Result<BilinearForm> {
        let basis = sub.matrix();
        let gram = &(&basis.transpose() * &self.gram) * &basis;
        BilinearForm::new_unchecked(
            GradedSpace::from_parities(&sub.parities()),
            self.parity,
            self.symmetry,
            gram,
        )
    }
}

/// `{x : <x, y> = 0 for all y}`.
pub fn radical(form: &BilinearForm) -> Subspace {
    Subspace::annihilator(form.space(), &form.gram().transpose())
}

/// Radical of a form together with a check that it is stable under `d`, which holds whenever
/// the form is compatible with the differential.
pub fn radical_checked(form: &BilinearForm, v: &DgSpace) -> Result<Subspace> {
    let rad = radical(form);
    for x in rad.mapped(v.d()) {
        if !rad.contains(&x) {
            return Err(Error::Precondition(
                "radical of the form is not stable under d".into(),
            ));
        }
    }
    Ok(rad)
}
