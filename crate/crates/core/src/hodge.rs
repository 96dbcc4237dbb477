//! Abstract Hodge decompositions: verification, the geometric picture
//! `V = im d ⊕ U ⊕ W`, construction for finite-dimensional spaces, and the
//! Green-operator correction of almost decompositions.
//!
//! Naming: `W` is always the harmonic part (the image of `t`) and `U` the isotropic
//! complement (the image of `s`).

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{self, BilinearForm, DgSpace, GradedMap, Parity, Subspace};
use crate::matrix::{self, Matrix};
use crate::scalar::{self, Scalar};

/// The pair `(s, t)` with `s` odd and `t` even, plus the claimed harmonious status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeData {
    pub s: GradedMap,
    pub t: GradedMap,
    pub harmonious: bool,
}

impl HodgeData {
    pub fn new(s: GradedMap, t: GradedMap, harmonious: bool) -> Result<Self> {
        if s.parity() != Parity::Odd {
            return Err(Error::ParityMismatch {
                expected: Parity::Odd,
                found: s.parity(),
            });
        }
        if t.parity() != Parity::Even {
            return Err(Error::ParityMismatch {
                expected: Parity::Even,
                found: t.parity(),
            });
        }
        if s.source() != s.target() || t.source() != t.target() || s.source() != t.source() {
            return Err(Error::SpaceMismatch(
                "s and t must be endomorphisms of the same space".into(),
            ));
        }
        Ok(Self { s, t, harmonious })
    }

    /// Builds `(s, t)` from raw matrices on the space of `v`, rejecting inhomogeneous entries.
    pub fn from_matrices(v: &DgSpace, s: Matrix, t: Matrix, harmonious: bool) -> Result<Self> {
        let s = GradedMap::endo(v.space(), Parity::Odd, s)?;
        let t = GradedMap::endo(v.space(), Parity::Even, t)?;
        Self::new(s, t, harmonious)
    }

    /// `s = 0, t = id`.
    pub fn trivial(v: &DgSpace) -> Self {
        let space = v.space();
        Self {
            s: GradedMap::zero(space, space, Parity::Odd),
            t: GradedMap::identity(space),
            harmonious: v.d().is_zero(),
        }
    }
}

/// Verdicts for the seven axioms, harmoniousness and the two derived identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// `s² = 0`
    pub s_squared_zero: bool,
    /// `<sx, y> = (-1)^{|x|} <x, sy>`
    pub s_self_adjoint: bool,
    /// `sd + ds = 1 - t`
    pub homotopy: bool,
    /// `dt = td`
    pub t_commutes_with_d: bool,
    /// `<tx, y> = <x, ty>`
    pub t_self_adjoint: bool,
    /// `t² = t`
    pub t_idempotent: bool,
    /// `st = ts = 0`
    pub st_ts_zero: bool,
    /// `dt = 0`
    pub harmonious: bool,
    pub harmonious_claimed: bool,
    pub sds_equals_s: bool,
    pub dsd_equals_d: bool,
}

impl AxiomReport {
    pub fn axioms(&self) -> [bool; 7] {
        [
            self.s_squared_zero,
            self.s_self_adjoint,
            self.homotopy,
            self.t_commutes_with_d,
            self.t_self_adjoint,
            self.t_idempotent,
            self.st_ts_zero,
        ]
    }

    /// All seven axioms.
    pub fn is_hodge(&self) -> bool {
        self.axioms().iter().all(|&a| a)
    }

    /// All seven axioms, and `dt = 0` if harmoniousness was claimed.
    pub fn passes(&self) -> bool {
        self.is_hodge() && (!self.harmonious_claimed || self.harmonious)
    }

    /// Given `s² = 0`, self-adjoint `s` and `sd + ds = 1 - t`: `t² = t ∧ st = ts = 0` iff `sds = s`,
    /// and harmonious iff `dsd = d`.
    /// `None` when those three do not all hold.
    pub fn equivalences(&self) -> Option<(bool, bool)> {
        if !(self.s_squared_zero && self.s_self_adjoint && self.homotopy) {
            return None;
        }
        Some((
            (self.t_idempotent && self.st_ts_zero) == self.sds_equals_s,
            self.harmonious == self.dsd_equals_d,
        ))
    }
}

fn parity_signs(v: &DgSpace) -> Matrix {
    let signs: Vec<Scalar> = v
        .space()
        .parities()
        .iter()
        .map(|p| p.sign().to_scalar())
        .collect();
    Matrix::diagonal(&signs)
}

fn check_spaces(h: &HodgeData, v: &DgSpace, b: &BilinearForm) -> Result<()> {
    if h.s.source() != v.space() || b.space() != v.space() {
        return Err(Error::SpaceMismatch(
            "Hodge data, dg space and form live on different spaces".into(),
        ));
    }
    Ok(())
}

/// Tests every axiom as an exact matrix identity.
pub fn verify(h: &HodgeData, v: &DgSpace, b: &BilinearForm) -> Result<AxiomReport> {
    check_spaces(h, v, b)?;
    let n = v.dim();
    let s = h.s.matrix();
    let t = h.t.matrix();
    let d = v.d().matrix();
    let g = b.gram();
    let sgn = parity_signs(v);
    let id = Matrix::identity(n);

    let sd = s * d;
    let ds = d * s;
    let dt = d * t;
    let st = s * t;
    let ts = t * s;
    Ok(AxiomReport {
        s_squared_zero: (s * s).is_zero(),
        s_self_adjoint: &s.transpose() * g == &(&sgn * g) * s,
        homotopy: &sd + &ds == &id - t,
        t_commutes_with_d: dt == t * d,
        t_self_adjoint: &t.transpose() * g == g * t,
        t_idempotent: &(t * t) == t,
        st_ts_zero: st.is_zero() && ts.is_zero(),
        harmonious: dt.is_zero(),
        harmonious_claimed: h.harmonious,
        sds_equals_s: &(&sd * s) == s,
        dsd_equals_d: &(&ds * d) == d,
    })
}

/// `V = im d ⊕ U ⊕ W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub boundaries: Subspace,
    pub isotropic: Subspace,
    pub harmonic: Subspace,
}

impl Decomposition {
    pub fn same_as(&self, other: &Decomposition) -> bool {
        self.boundaries.same_as(&other.boundaries)
            && self.isotropic.same_as(&other.isotropic)
            && self.harmonic.same_as(&other.harmonic)
    }

    /// Checks every defining condition, naming the first one that fails.
    pub fn validate(&self, v: &DgSpace, b: &BilinearForm) -> Result<()> {
        let invalid = |msg: &str| Err(Error::InvalidDecomposition(msg.to_string()));
        let d = v.d();
        let g = b.gram();
        if !self.boundaries.same_as(&Subspace::image_of(d)) {
            return invalid("first block is not im d");
        }
        let mut all = self.boundaries.basis().to_vec();
        all.extend(self.isotropic.basis().iter().cloned());
        all.extend(self.harmonic.basis().iter().cloned());
        if all.len() != v.dim() || !matrix::independent(v.dim(), &all) {
            return invalid("im d, U and W do not form a direct sum equal to V");
        }
        if !self
            .harmonic
            .mapped(d)
            .iter()
            .all(|x| x.iter().all(Zero::is_zero))
        {
            return invalid("d does not vanish on W");
        }
        let du = Matrix::from_columns(v.dim(), &self.isotropic.mapped(d));
        if self.isotropic.dim() != self.boundaries.dim() || du.rank() != self.isotropic.dim() {
            return invalid("d does not map U isomorphically onto im d");
        }
        let u = self.isotropic.matrix();
        if !(&(&u.transpose() * g) * &u).is_zero() {
            return invalid("U is not isotropic");
        }
        let w = self.harmonic.matrix();
        let rest = Matrix::from_columns(
            v.dim(),
            &all[..self.boundaries.dim() + self.isotropic.dim()],
        );
        if !(&(&w.transpose() * g) * &rest).is_zero() || !(&(&rest.transpose() * g) * &w).is_zero()
        {
            return invalid("W is not orthogonal to im d ⊕ U");
        }
        Ok(())
    }
}

/// `s` inverts `d: U -> im d` and vanishes on `U ⊕ W`; `t` projects onto `W` along `im d ⊕ U`.
pub fn from_decomposition(dec: &Decomposition, v: &DgSpace, b: &BilinearForm) -> Result<HodgeData> {
    dec.validate(v, b)?;
    let n = v.dim();
    let k = dec.boundaries.dim();
    let h = dec.harmonic.dim();

    // d(u_j) = sum_i a_ij b_i
    let du = Matrix::from_columns(n, &dec.isotropic.mapped(v.d()));
    let a = dec
        .boundaries
        .matrix()
        .solve_matrix(&du)
        .ok_or_else(|| Error::InvalidDecomposition("d(U) is not inside im d".into()))?;
    let a_inv = a
        .inverse()
        .ok_or_else(|| Error::InvalidDecomposition("d restricted to U is singular".into()))?;

    let mut s_local = Matrix::zeros(n, n);
    let mut t_local = Matrix::zeros(n, n);
    for i in 0..k {
        for j in 0..k {
            s_local[(k + i, j)] = a_inv[(i, j)].clone();
        }
    }
    for i in 0..h {
        t_local[(2 * k + i, 2 * k + i)] = scalar::one();
    }

    let mut columns = dec.boundaries.basis().to_vec();
    columns.extend(dec.isotropic.basis().iter().cloned());
    columns.extend(dec.harmonic.basis().iter().cloned());
    let p = Matrix::from_columns(n, &columns);
    let p_inv = p.inverse().expect("validated decomposition is a basis");
    let s = &(&p * &s_local) * &p_inv;
    let t = &(&p * &t_local) * &p_inv;
    HodgeData::from_matrices(v, s, t, true)
}

/// `(im d, im s, im t)`.
pub fn decompose(h: &HodgeData, v: &DgSpace) -> Result<Decomposition> {
    if !(v.d().matrix() * h.t.matrix()).is_zero() {
        return Err(Error::NotHarmonious);
    }
    Ok(Decomposition {
        boundaries: Subspace::image_of(v.d()),
        isotropic: Subspace::image_of(&h.s),
        harmonic: Subspace::image_of(&h.t),
    })
}

/// First basis pair breaking `<dx, y> + (-1)^{|x|} <x, dy> = 0`.
pub fn compatibility_violation(v: &DgSpace, b: &BilinearForm) -> Option<(usize, usize)> {
    let d = v.d().matrix();
    let g = b.gram();
    let lhs = &(&d.transpose() * g) + &(&(&parity_signs(v) * g) * d);
    lhs.first_nonzero().map(|(i, j, _)| (i, j))
}

/// A harmonious Hodge decomposition of a finite-dimensional dg space with a compatible
/// (anti)symmetric form.
///
/// Fails with [`Error::NoDgComplement`] when the radical of the form has no d-stable
/// complement. This happens exactly when some boundary lies in the radical without being the
/// boundary of a radical vector, and then no Hodge decomposition exists at all: for
/// `V = <a, b>` with `db = a` and `<b, b> = 1`, self-adjointness of `s` forces
/// `<sa, b> = ±<a, sb> = 0`, while `sd + ds = 1 - t` forces `sa = b + λa`, so `<sa, b> = 1`.
pub fn build_harmonious(v: &DgSpace, b: &BilinearForm) -> Result<HodgeData> {
    let dec = harmonious_decomposition(v, b)?;
    from_decomposition(&dec, v, b)
}

/// The decomposition `im d ⊕ U ⊕ W` behind [`build_harmonious`].
pub fn harmonious_decomposition(v: &DgSpace, b: &BilinearForm) -> Result<Decomposition> {
    if b.space() != v.space() {
        return Err(Error::SpaceMismatch(
            "form and dg space live on different spaces".into(),
        ));
    }
    if let Some((i, j)) = b.symmetry_violation() {
        return Err(Error::Precondition(format!(
            "form breaks its symmetry rule at ({i}, {j})"
        )));
    }
    if let Some((i, j)) = b.parity_violation() {
        return Err(Error::Precondition(format!(
            "form breaks its parity at ({i}, {j})"
        )));
    }
    if let Some((i, j)) = compatibility_violation(v, b) {
        return Err(Error::Precondition(format!(
            "form is not compatible with d at basis pair ({i}, {j})"
        )));
    }
    let radical = graded::radical_checked(b, v)?;
    let complement = dg_complement(v, &radical)?;
    let (w_rad, u_rad) = zero_form_part(v, &radical)?;
    let (w_nd, u_nd) = nondegenerate_part(v, b, &complement)?;
    Ok(Decomposition {
        boundaries: Subspace::image_of(v.d()),
        isotropic: u_rad.direct_sum(&u_nd)?,
        harmonic: w_rad.direct_sum(&w_nd)?,
    })
}

/// Homogeneous preimage of a homogeneous boundary.
fn preimage(d: &GradedMap, y: &[Scalar]) -> Option<Vec<Scalar>> {
    let parity = d.target().vector_parity(y).ok()??;
    let cols = d.source().indices_of(parity + d.parity());
    let rows: Vec<usize> = (0..d.target().dim()).collect();
    let x = d.matrix().select(&rows, &cols).solve(y)?;
    let mut out = vec![Scalar::zero(); d.source().dim()];
    for (c, xi) in cols.into_iter().zip(x) {
        out[c] = xi;
    }
    Some(out)
}

/// A d-stable complement of the d-stable subspace `sub`, assembled from contractible pairs
/// `(x, dx)` and cycles.
pub fn dg_complement(v: &DgSpace, sub: &Subspace) -> Result<Subspace> {
    let d = v.d();
    let n = v.dim();
    let d_sub = Subspace::span(v.space(), &sub.mapped(d))?;
    let boundaries = Subspace::image_of(d);
    let meet = sub.dim() + boundaries.dim() - sub.sum(&boundaries).dim();
    if meet != d_sub.dim() {
        return Err(Error::NoDgComplement(format!(
            "{meet} independent boundaries lie in the radical but only {} of them are boundaries of radical vectors",
            d_sub.dim()
        )));
    }
    let extra_boundaries = d_sub.complement_within(&boundaries);
    let mut pairs = Vec::new();
    let mut targets = Vec::new();
    for y in extra_boundaries.basis() {
        pairs.push(preimage(d, y).expect("boundary has a preimage"));
        targets.push(y.clone());
    }
    let mut collected = sub.basis().to_vec();
    collected.extend(pairs.iter().cloned());
    collected.extend(targets.iter().cloned());
    let kernel = Subspace::kernel_of(d);
    let cycles: Vec<Vec<Scalar>> = matrix::extend_basis(n, &collected, kernel.basis())
        .into_iter()
        .map(|k| kernel.basis()[k].clone())
        .collect();
    let mut basis = pairs;
    basis.extend(targets);
    basis.extend(cycles);
    let complement = Subspace::new(v.space().clone(), basis)?;
    debug_assert_eq!(complement.dim() + sub.dim(), n);
    Ok(complement)
}

fn lift(frame: &Subspace, local: &Subspace) -> Result<Subspace> {
    let m = frame.matrix();
    Subspace::new(
        frame.ambient().clone(),
        local.basis().iter().map(|x| m.mul_vec(x)).collect(),
    )
}

/// Zero-form branch: `W` represents the homology, `U` is any complement of `im d ⊕ W`.
fn zero_form_part(v: &DgSpace, radical: &Subspace) -> Result<(Subspace, Subspace)> {
    let local = v.restrict(radical)?;
    let hom = graded::homology(&local);
    let u = hom
        .cycles
        .complement_within(&Subspace::whole(local.space()));
    Ok((lift(radical, &hom.representatives)?, lift(radical, &u)?))
}

/// Nondegenerate branch: `W` represents the homology, and `U` is the orthogonal of `im d`
/// inside `W^⊥` for an auxiliary form `(,)` with `<x, y> = (dx, y) + (-1)^{|x|} (x, dy)`.
fn nondegenerate_part(
    v: &DgSpace,
    b: &BilinearForm,
    frame: &Subspace,
) -> Result<(Subspace, Subspace)> {
    let local = v.restrict(frame)?;
    let form = b.restrict(frame)?;
    if !form.is_nondegenerate() {
        return Err(Error::Precondition(
            "form is degenerate on the complement of its radical".into(),
        ));
    }
    let hom = graded::homology(&local);
    let w = hom.representatives;
    if !form.restrict(&w)?.is_nondegenerate() {
        return Err(Error::DegenerateHarmonicForm);
    }

    let pairing_with_w = (form.gram() * &w.matrix()).transpose();
    let perp = Subspace::annihilator(local.space(), &pairing_with_w);
    if perp.dim() + w.dim() != local.dim() {
        return Err(Error::DegenerateHarmonicForm);
    }
    let perp_dg = local.restrict(&perp)?;
    let perp_form = form.restrict(&perp)?;
    let aux = auxiliary_form(&perp_dg, &perp_form)?;

    let boundaries = Subspace::image_of(perp_dg.d());
    let functionals = &boundaries.matrix().transpose() * &aux;
    let u = Subspace::annihilator(perp_dg.space(), &functionals);
    if boundaries.direct_sum(&u).map(|s| s.dim()) != Ok(perp_dg.dim()) {
        return Err(Error::Precondition(
            "im d and its auxiliary orthogonal do not span W^⊥".into(),
        ));
    }
    let u_local = lift(&perp, &u)?;
    Ok((lift(frame, &w)?, lift(frame, &u_local)?))
}

/// Solves `<f_i, f_j> = (d f_i, f_j) + (-1)^{|f_i|} (f_i, d f_j)` for a form `(,)` of the
/// opposite parity and the same symmetry, taking the particular solution with free unknowns
/// set to zero.
pub fn auxiliary_form(v: &DgSpace, b: &BilinearForm) -> Result<Matrix> {
    let n = v.dim();
    let par = v.space().parities();
    let aux_parity = b.parity().flip();
    let mut unknown = vec![vec![None; n]; n];
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            if par[i] + par[j] == aux_parity {
                unknown[i][j] = Some(count);
                count += 1;
            }
        }
    }
    let d = v.d().matrix();
    let g = b.gram();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![Scalar::zero(); count];
            // (d f_i, f_j) = sum_l d[l][i] c[l][j]
            for l in 0..n {
                if let Some(k) = unknown[l][j] {
                    row[k] += &d[(l, i)];
                }
            }
            // (-1)^{|f_i|} (f_i, d f_j) = (-1)^{|f_i|} sum_l d[l][j] c[i][l]
            let sign = par[i].sign();
            for l in 0..n {
                if let Some(k) = unknown[i][l] {
                    row[k] += sign.apply(d[(l, j)].clone());
                }
            }
            rows.push(row);
            rhs.push(g[(i, j)].clone());
        }
    }
    for i in 0..n {
        for j in i..n {
            if let (Some(a), Some(bk)) = (unknown[i][j], unknown[j][i]) {
                let mut row = vec![Scalar::zero(); count];
                row[a] += scalar::one();
                let partner = (b.symmetry().sign() * (par[i] * par[j]).sign()).to_scalar();
                row[bk] -= partner;
                rows.push(row);
                rhs.push(Scalar::zero());
            }
        }
    }
    let solution = if count == 0 {
        if g.is_zero() {
            Vec::new()
        } else {
            return Err(Error::AuxiliarySystemInconsistent);
        }
    } else {
        Matrix::from_rows(rows)
            .solve(&rhs)
            .ok_or(Error::AuxiliarySystemInconsistent)?
    };
    let mut c = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if let Some(k) = unknown[i][j] {
                c[(i, j)] = solution[k].clone();
            }
        }
    }
    Ok(c)
}

/// Same axioms as [`HodgeData`] except that `sd + ds = 1 - t` is weakened to invertibility of `ds + sd + t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostHodgeData {
    pub s: GradedMap,
    pub t: GradedMap,
}

impl AlmostHodgeData {
    pub fn new(s: GradedMap, t: GradedMap) -> Result<Self> {
        let h = HodgeData::new(s, t, false)?;
        Ok(Self { s: h.s, t: h.t })
    }

    pub fn from_matrices(v: &DgSpace, s: Matrix, t: Matrix) -> Result<Self> {
        let h = HodgeData::from_matrices(v, s, t, false)?;
        Ok(Self { s: h.s, t: h.t })
    }

    /// Report for the axioms that an almost decomposition keeps, plus invertibility.
    pub fn check(&self, v: &DgSpace, b: &BilinearForm) -> Result<AlmostReport> {
        let h = HodgeData {
            s: self.s.clone(),
            t: self.t.clone(),
            harmonious: false,
        };
        let r = verify(&h, v, b)?;
        Ok(AlmostReport {
            axioms_except_homotopy: [
                r.s_squared_zero,
                r.s_self_adjoint,
                r.t_commutes_with_d,
                r.t_self_adjoint,
                r.t_idempotent,
                r.st_ts_zero,
            ]
            .iter()
            .all(|&a| a),
            invertible: self.laplacian_plus_t(v).inverse().is_some(),
        })
    }

    fn laplacian_plus_t(&self, v: &DgSpace) -> Matrix {
        let d = v.d().matrix();
        let s = self.s.matrix();
        &(&(d * s) + &(s * d)) + self.t.matrix()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlmostReport {
    pub axioms_except_homotopy: bool,
    pub invertible: bool,
}

/// The operator inverse to `ds + sd` on `ker t` and zero on `im t`, i.e. `(ds + sd + t)^{-1} - t`.
pub fn green_operator(a: &AlmostHodgeData, v: &DgSpace) -> Result<Matrix> {
    let t = a.t.matrix();
    let d = v.d().matrix();
    if &(t * t) != t {
        return Err(Error::Precondition("t is not idempotent".into()));
    }
    if !(a.s.matrix() * t).is_zero() || !(t * a.s.matrix()).is_zero() {
        return Err(Error::Precondition("st or ts is nonzero".into()));
    }
    if d * t != t * d {
        return Err(Error::Precondition("t does not commute with d".into()));
    }
    let inv = a
        .laplacian_plus_t(v)
        .inverse()
        .ok_or_else(|| Error::NotInvertible("ds + sd on ker t".into()))?;
    Ok(&inv - t)
}

/// Replaces `s` by `sG`, turning an almost Hodge decomposition into a genuine one.
pub fn green_correct(a: &AlmostHodgeData, v: &DgSpace, b: &BilinearForm) -> Result<HodgeData> {
    if a.s.source() != v.space() || b.space() != v.space() {
        return Err(Error::SpaceMismatch(
            "almost Hodge data, dg space and form live on different spaces".into(),
        ));
    }
    let g = green_operator(a, v)?;
    let s = a.s.matrix() * &g;
    let harmonious = (v.d().matrix() * a.t.matrix()).is_zero();
    HodgeData::from_matrices(v, s, a.t.matrix().clone(), harmonious)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{GradedSpace, Symmetry};
    use crate::scalar::{int, ratio};
    use Parity::{Even, Odd};

    /// a even, b odd, d(b) = a
    fn contractible() -> DgSpace {
        DgSpace::new(
            GradedSpace::from_parities(&[Even, Odd]),
            Matrix::from_i64(&[&[0, 1], &[0, 0]]),
        )
        .unwrap()
    }

    fn odd_pairing(v: &DgSpace) -> BilinearForm {
        BilinearForm::new(
            v.space().clone(),
            Odd,
            Symmetry::Symmetric,
            Matrix::from_i64(&[&[0, 1], &[1, 0]]),
        )
        .unwrap()
    }

    #[test]
    fn trivial_decomposition_with_zero_differential() {
        let v = DgSpace::with_zero_differential(GradedSpace::from_parities(&[Even, Odd, Even]));
        let b = BilinearForm::zero(v.space());
        let r = verify(&HodgeData::trivial(&v), &v, &b).unwrap();
        assert!(r.passes() && r.harmonious);
    }

    #[test]
    fn trivial_decomposition_with_nonzero_differential_is_not_harmonious() {
        let v = contractible();
        let b = BilinearForm::zero(v.space());
        let mut h = HodgeData::trivial(&v);
        h.harmonious = true;
        let r = verify(&h, &v, &b).unwrap();
        assert!(r.is_hodge());
        assert!(!r.harmonious && !r.dsd_equals_d);
        assert!(!r.passes());
    }

    #[test]
    fn verify_rejects_wrong_parities() {
        let v = contractible();
        let id = GradedMap::identity(v.space());
        assert!(matches!(
            HodgeData::new(id.clone(), id, true),
            Err(Error::ParityMismatch { .. })
        ));
    }

    #[test]
    fn from_decomposition_contractible() {
        let v = contractible();
        let b = BilinearForm::zero(v.space());
        let dec = Decomposition {
            boundaries: Subspace::new(v.space().clone(), vec![vec![int(1), int(0)]]).unwrap(),
            isotropic: Subspace::new(v.space().clone(), vec![vec![int(0), int(1)]]).unwrap(),
            harmonic: Subspace::zero(v.space()),
        };
        let h = from_decomposition(&dec, &v, &b).unwrap();
        assert_eq!(h.s.matrix(), &Matrix::from_i64(&[&[0, 0], &[1, 0]]));
        assert!(h.t.is_zero());
        assert!(decompose(&h, &v).unwrap().same_as(&dec));
    }

    #[test]
    fn from_decomposition_reports_failed_condition() {
        let v = contractible();
        let b = odd_pairing(&v);
        // U = span(a) cannot be mapped onto im d
        let dec = Decomposition {
            boundaries: Subspace::image_of(v.d()),
            isotropic: Subspace::zero(v.space()),
            harmonic: Subspace::new(v.space().clone(), vec![vec![int(0), int(1)]]).unwrap(),
        };
        let err = from_decomposition(&dec, &v, &b).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidDecomposition("d does not vanish on W".into())
        );
    }

    #[test]
    fn build_contractible_nondegenerate_by_hand() {
        let v = contractible();
        let b = odd_pairing(&v);
        let h = build_harmonious(&v, &b).unwrap();
        // W = 0, U = span(b), s(a) = b
        assert_eq!(h.s.matrix(), &Matrix::from_i64(&[&[0, 0], &[1, 0]]));
        assert!(h.t.is_zero());
        assert!(verify(&h, &v, &b).unwrap().passes());
    }

    #[test]
    fn build_zero_form_branch() {
        let v = DgSpace::new(
            GradedSpace::from_parities(&[Even, Odd, Even, Odd]),
            Matrix::from_i64(&[&[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]),
        )
        .unwrap();
        let b = BilinearForm::zero(v.space());
        let h = build_harmonious(&v, &b).unwrap();
        let r = verify(&h, &v, &b).unwrap();
        assert!(r.passes());
        assert_eq!(Subspace::image_of(&h.t).dim(), 2);
    }

    #[test]
    fn radical_without_dg_complement() {
        // a odd, b even, d(b) = a, <b, b> = 1: no Hodge decomposition exists
        let v = DgSpace::new(
            GradedSpace::from_parities(&[Odd, Even]),
            Matrix::from_i64(&[&[0, 1], &[0, 0]]),
        )
        .unwrap();
        let b = BilinearForm::new(
            v.space().clone(),
            Even,
            Symmetry::Symmetric,
            Matrix::from_i64(&[&[0, 0], &[0, 1]]),
        )
        .unwrap();
        assert!(compatibility_violation(&v, &b).is_none());
        assert!(matches!(
            build_harmonious(&v, &b),
            Err(Error::NoDgComplement(_))
        ));
    }

    #[test]
    fn incompatible_form_rejected() {
        // a even, b odd, d(b) = a, <a, a> = 1 breaks <db, a> + (-1)^{|b|} <b, da> = 0
        let v = contractible();
        let b = BilinearForm::new(
            v.space().clone(),
            Even,
            Symmetry::Symmetric,
            Matrix::from_i64(&[&[1, 0], &[0, 0]]),
        )
        .unwrap();
        assert!(matches!(
            build_harmonious(&v, &b),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn green_correction_of_genuine_data_is_identity() {
        let v = contractible();
        let b = odd_pairing(&v);
        let h = build_harmonious(&v, &b).unwrap();
        let a = AlmostHodgeData::new(h.s.clone(), h.t.clone()).unwrap();
        let g = green_operator(&a, &v).unwrap();
        assert_eq!(g, Matrix::identity(2));
        assert_eq!(green_correct(&a, &v, &b).unwrap(), h);
    }

    #[test]
    fn green_correction_undoes_scaling() {
        let v = contractible();
        let b = odd_pairing(&v);
        let h = build_harmonious(&v, &b).unwrap();
        let doubled =
            AlmostHodgeData::from_matrices(&v, h.s.matrix().scale(&int(2)), h.t.matrix().clone())
                .unwrap();
        let g = green_operator(&doubled, &v).unwrap();
        assert_eq!(g, Matrix::identity(2).scale(&ratio(1, 2)));
        let fixed = green_correct(&doubled, &v, &b).unwrap();
        assert_eq!(fixed.s, h.s);
    }

    #[test]
    fn green_correction_needs_invertibility() {
        let v = contractible();
        let b = BilinearForm::zero(v.space());
        let a = AlmostHodgeData::new(
            GradedMap::zero(v.space(), v.space(), Odd),
            GradedMap::zero(v.space(), v.space(), Even),
        )
        .unwrap();
        assert!(matches!(
            green_correct(&a, &v, &b),
            Err(Error::NotInvertible(_))
        ));
    }
}
