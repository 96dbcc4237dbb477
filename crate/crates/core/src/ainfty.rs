//! A∞-structures on the parity-reversed space `ΠV`, the Stasheff relations, cyclic tensors
//! and cyclic invariance.
//!
//! `ΠV` shares coordinates with `V`; only parities flip. Every `m_n` is an odd map on `ΠV`,
//! `m_1` is `d` read on `ΠV`, and a dga product transports as
//! `m_2(Πa, Πb) = (-1)^{|a|} Π(ab)`.
//!
//! Cyclic tensors pair with the form read on `ΠV`: `ω(Πx, Πy) = (-1)^{|x|} <x, y>`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{BilinearForm, DgSpace, GradedMap, GradedSpace, Parity};
use crate::hodge::compatibility_violation;
use crate::multilinear::MultilinearMap;
use crate::scalar::{self, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfinityStructure {
    underlying: DgSpace,
    shifted: GradedSpace,
    m1: MultilinearMap,
    /// `ops[k]` is `m_{k+2}`.
    ops: Vec<MultilinearMap>,
}

impl AInfinityStructure {
    /// `ops` may list any subset of arities `2..=cutoff`; missing ones are zero.
    pub fn new(underlying: DgSpace, cutoff: usize, ops: Vec<MultilinearMap>) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::ArityOutOfRange {
                arity: cutoff,
                min: 2,
                max: usize::MAX,
            });
        }
        let shifted = underlying.space().reversed();
        let m1 = MultilinearMap::from_linear(&underlying.d().on_reversed());
        let mut table: Vec<MultilinearMap> = (2..=cutoff)
            .map(|n| MultilinearMap::zero_on(&shifted, n, Parity::Odd))
            .collect();
        for op in ops {
            let n = op.arity();
            if !(2..=cutoff).contains(&n) {
                return Err(Error::ArityOutOfRange {
                    arity: n,
                    min: 2,
                    max: cutoff,
                });
            }
            if op.inputs().iter().any(|s| s != &shifted) || op.output() != &shifted {
                return Err(Error::SpaceMismatch(format!(
                    "m_{n} is not a map on the parity-reversed space"
                )));
            }
            if op.parity() != Parity::Odd && !op.is_zero() {
                return Err(Error::ParityMismatch {
                    expected: Parity::Odd,
                    found: op.parity(),
                });
            }
            table[n - 2].add_assign(&op)?;
        }
        Ok(Self {
            underlying,
            shifted,
            m1,
            ops: table,
        })
    }

    /// Transports an even associative product on `V` (arity 2) to `ΠV`.
    pub fn from_dga(underlying: DgSpace, product: &MultilinearMap, cutoff: usize) -> Result<Self> {
        let space = underlying.space();
        if product.arity() != 2
            || product.inputs().iter().any(|s| s != space)
            || product.output() != space
        {
            return Err(Error::SpaceMismatch(
                "product must be a bilinear map V ⊗ V -> V".into(),
            ));
        }
        if product.parity() != Parity::Even && !product.is_zero() {
            return Err(Error::ParityMismatch {
                expected: Parity::Even,
                found: product.parity(),
            });
        }
        let shifted = space.reversed();
        let mut m2 = MultilinearMap::zero_on(&shifted, 2, Parity::Odd);
        for (input, out, c) in product.iter() {
            let sign = space.parity(input[0]).sign();
            m2.add_entry(input.to_vec(), out, sign.apply(c.clone()))?;
        }
        Self::new(underlying, cutoff, vec![m2])
    }

    pub fn underlying(&self) -> &DgSpace {
        &self.underlying
    }

    pub fn shifted_space(&self) -> &GradedSpace {
        &self.shifted
    }

    pub fn cutoff(&self) -> usize {
        self.ops.len() + 1
    }

    /// `m_n` for `1 <= n <= cutoff`.
    pub fn m(&self, n: usize) -> Result<&MultilinearMap> {
        match n {
            1 => Ok(&self.m1),
            n if (2..=self.cutoff()).contains(&n) => Ok(&self.ops[n - 2]),
            n => Err(Error::ArityOutOfRange {
                arity: n,
                min: 1,
                max: self.cutoff(),
            }),
        }
    }

    /// `m_2, ..., m_N`.
    pub fn higher_ops(&self) -> &[MultilinearMap] {
        &self.ops
    }

    /// Same operations with a different cutoff: extra arities are zero, dropped ones must be zero.
    pub fn with_cutoff(&self, cutoff: usize) -> Result<Self> {
        if let Some(n) = (cutoff + 1..=self.cutoff()).find(|&n| !self.ops[n - 2].is_zero()) {
            return Err(Error::ArityOutOfRange {
                arity: n,
                min: 2,
                max: cutoff,
            });
        }
        let kept = self
            .ops
            .iter()
            .filter(|m| m.arity() <= cutoff)
            .cloned()
            .collect();
        Self::new(self.underlying.clone(), cutoff, kept)
    }

    /// Largest arity with a nonzero operation (1 if all `m_{n>=2}` vanish).
    pub fn top_arity(&self) -> usize {
        self.ops
            .iter()
            .rposition(|m| !m.is_zero())
            .map_or(1, |k| k + 2)
    }
}

/// `(input multi-index, output index, coefficient)` of a nonzero entry.
pub type Witness = (Vec<usize>, usize, Scalar);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormReport {
    pub symmetric: bool,
    pub compatible: bool,
    pub symmetry_witness: Option<(usize, usize)>,
    pub parity_witness: Option<(usize, usize)>,
    pub compatibility_witness: Option<(usize, usize)>,
}

impl FormReport {
    pub fn passes(&self) -> bool {
        self.symmetric && self.compatible
    }
}

/// Graded (anti)symmetry, parity, and `<dx, y> + (-1)^{|x|} <x, dy> = 0` on basis pairs.
pub fn check_form(v: &DgSpace, b: &BilinearForm) -> Result<FormReport> {
    if v.space() != b.space() {
        return Err(Error::SpaceMismatch(
            "form and dg space live on different spaces".into(),
        ));
    }
    let symmetry_witness = b.symmetry_violation();
    let parity_witness = b.parity_violation();
    let compatibility_witness = compatibility_violation(v, b);
    Ok(FormReport {
        symmetric: symmetry_witness.is_none() && parity_witness.is_none(),
        compatible: compatibility_witness.is_none(),
        symmetry_witness,
        parity_witness,
        compatibility_witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArityVerdict {
    pub n: usize,
    pub pass: bool,
    #[serde(serialize_with = "serialize_witness")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StasheffReport {
    pub cutoff: usize,
    pub arities: Vec<ArityVerdict>,
}

impl StasheffReport {
    pub fn passes(&self) -> bool {
        self.arities.iter().all(|a| a.pass)
    }

    pub fn first_failure(&self) -> Option<&ArityVerdict> {
        self.arities.iter().find(|a| !a.pass)
    }
}

fn serialize_witness<S: serde::Serializer>(
    w: &Option<Witness>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Shown<'a> {
        #[serde(rename = "in")]
        input: &'a [usize],
        out: usize,
        c: String,
    }
    w.as_ref()
        .map(|(input, out, c)| Shown {
            input,
            out: *out,
            c: scalar::format(c),
        })
        .serialize(s)
}

/// `sum_{i+j+k=n} m_{i+1+k} ∘ (id^{⊗i} ⊗ m_j ⊗ id^{⊗k})` as a single tensor.
pub fn stasheff_tensor(a: &AInfinityStructure, n: usize) -> Result<MultilinearMap> {
    if !(1..=a.cutoff()).contains(&n) {
        return Err(Error::ArityOutOfRange {
            arity: n,
            min: 1,
            max: a.cutoff(),
        });
    }
    let mut total = MultilinearMap::zero_on(a.shifted_space(), n, Parity::Even);
    for j in 1..=n {
        let inner = a.m(j)?;
        let outer = a.m(n - j + 1)?;
        if inner.is_zero() || outer.is_zero() {
            continue;
        }
        for i in 0..=n - j {
            total.add_assign(&outer.compose_at(i, inner)?)?;
        }
    }
    Ok(total)
}

/// The Stasheff relation at each arity `1..=cutoff`, each of which only involves `m_j` with
/// `j <= n` and is therefore complete below the cutoff.
pub fn check_stasheff(a: &AInfinityStructure) -> Result<StasheffReport> {
    let mut arities = Vec::new();
    for n in 1..=a.cutoff() {
        let relation = stasheff_tensor(a, n)?;
        let witness = relation.first_entry();
        arities.push(ArityVerdict {
            n,
            pass: witness.is_none(),
            witness,
        });
    }
    Ok(StasheffReport {
        cutoff: a.cutoff(),
        arities,
    })
}

/// Sparse `(n+1)`-tensor `ω(m_n(v_0, ..., v_{n-1}), v_n)` on basis multi-indices of `ΠV`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicTensor {
    pub arity: usize,
    pub entries: BTreeMap<Vec<usize>, Scalar>,
}

impl CyclicTensor {
    pub fn get(&self, index: &[usize]) -> Scalar {
        self.entries
            .get(index)
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn scale(&self, c: &Scalar) -> CyclicTensor {
        let entries = self
            .entries
            .iter()
            .map(|(k, x)| (k.clone(), x * c))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        CyclicTensor {
            arity: self.arity,
            entries,
        }
    }
}

fn check_form_space(a: &AInfinityStructure, b: &BilinearForm) -> Result<()> {
    if b.space() != a.underlying().space() {
        return Err(Error::SpaceMismatch(
            "form does not live on the underlying space".into(),
        ));
    }
    Ok(())
}

fn tensor_of(a: &AInfinityStructure, b: &BilinearForm, n: usize) -> Result<CyclicTensor> {
    check_form_space(a, b)?;
    let m = a.m(n)?;
    let g = b.gram();
    let space = a.underlying().space();
    let mut entries = BTreeMap::new();
    for (input, out, c) in m.iter() {
        let sign = space.parity(out).sign();
        for last in 0..g.cols() {
            let pairing = &g[(out, last)];
            if pairing.is_zero() {
                continue;
            }
            let mut key = input.to_vec();
            key.push(last);
            let slot = entries.entry(key).or_insert_with(Scalar::zero);
            *slot += sign.apply(c * pairing);
        }
    }
    entries.retain(|_, x: &mut Scalar| !x.is_zero());
    Ok(CyclicTensor { arity: n, entries })
}

/// The cyclic tensor of `m_n`, `2 <= n <= cutoff`.
pub fn cyclic_tensor(a: &AInfinityStructure, b: &BilinearForm, n: usize) -> Result<CyclicTensor> {
    if !(2..=a.cutoff()).contains(&n) {
        return Err(Error::ArityOutOfRange {
            arity: n,
            min: 2,
            max: a.cutoff(),
        });
    }
    tensor_of(a, b, n)
}

/// `(-1)^{|v_0| (|v_1| + ... + |v_n|)}` in `ΠV`.
pub fn rotation_sign(shifted: &GradedSpace, index: &[usize]) -> crate::graded::Sign {
    let first = shifted.parity(index[0]);
    (first * Parity::sum(index[1..].iter().map(|&i| shifted.parity(i)))).sign()
}

/// `(v_1, ..., v_n, v_0)`.
pub fn rotate(index: &[usize]) -> Vec<usize> {
    let mut out = index[1..].to_vec();
    out.push(index[0]);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicWitness {
    pub index: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicVerdict {
    pub n: usize,
    pub pass: bool,
    pub witness: Option<CyclicWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicReport {
    pub cutoff: usize,
    pub arities: Vec<CyclicVerdict>,
}

impl CyclicReport {
    pub fn passes(&self) -> bool {
        self.arities.iter().all(|a| a.pass)
    }

    pub fn first_failure(&self) -> Option<&CyclicVerdict> {
        self.arities.iter().find(|a| !a.pass)
    }
}

/// First multi-index breaking `T(v_0, ..., v_n) = (-1)^{|v_0|(|v_1|+...+|v_n|)} T(v_1, ..., v_n, v_0)`.
pub fn cyclic_violation(shifted: &GradedSpace, t: &CyclicTensor) -> Option<CyclicWitness> {
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    for key in t.entries.keys() {
        candidates.push(key.clone());
        // the index whose rotation is `key`
        let mut pre = vec![key[key.len() - 1]];
        pre.extend_from_slice(&key[..key.len() - 1]);
        candidates.push(pre);
    }
    candidates.sort();
    candidates.dedup();
    candidates.into_iter().find_map(|index| {
        let lhs = t.get(&index);
        let rhs = rotation_sign(shifted, &index).apply(t.get(&rotate(&index)));
        (lhs != rhs).then(|| CyclicWitness {
            index,
            lhs: scalar::format(&lhs),
            rhs: scalar::format(&rhs),
        })
    })
}

/// Cyclic invariance of every `m_n`, `1 <= n <= cutoff`, under the generating rotation.
pub fn check_cyclic(a: &AInfinityStructure, b: &BilinearForm) -> Result<CyclicReport> {
    let mut arities = Vec::new();
    for n in 1..=a.cutoff() {
        let t = tensor_of(a, b, n)?;
        let witness = cyclic_violation(a.shifted_space(), &t);
        arities.push(CyclicVerdict {
            n,
            pass: witness.is_none(),
            witness,
        });
    }
    Ok(CyclicReport {
        cutoff: a.cutoff(),
        arities,
    })
}

/// Structure constants of one operation in the exchange format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpConstants {
    pub n: usize,
    pub entries: Vec<ConstantEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantEntry {
    #[serde(rename = "in")]
    pub input: Vec<usize>,
    pub out: usize,
    pub c: String,
}

impl OpConstants {
    pub fn from_map(m: &MultilinearMap) -> Self {
        let entries = m
            .iter()
            .map(|(input, out, c)| ConstantEntry {
                input: input.to_vec(),
                out,
                c: scalar::format(c),
            })
            .collect();
        Self {
            n: m.arity(),
            entries,
        }
    }

    /// Builds the map on `space^{⊗n}` with the given parity.
    pub fn to_map(&self, space: &GradedSpace, parity: Parity) -> Result<MultilinearMap> {
        let mut m = MultilinearMap::zero_on(space, self.n, parity);
        for (k, e) in self.entries.iter().enumerate() {
            let c = scalar::parse(&e.c).map_err(|message| Error::Parse {
                field: format!("entries[{k}].c"),
                message,
            })?;
            m.add_entry(e.input.clone(), e.out, c)?;
        }
        Ok(m)
    }
}

/// `m_1` as the odd map `d` on `ΠV`, for callers that want it as a [`GradedMap`].
pub fn shifted_differential(v: &DgSpace) -> GradedMap {
    v.d().on_reversed()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{Sign, Symmetry};
    use crate::matrix::Matrix;
    use crate::scalar::int;
    use Parity::{Even, Odd};

    fn product(space: &GradedSpace, table: &[(usize, usize, usize, i64)]) -> MultilinearMap {
        let mut m = MultilinearMap::zero_on(space, 2, Even);
        for &(a, b, o, c) in table {
            m.add_entry(vec![a, b], o, int(c)).unwrap();
        }
        m
    }

    /// `k[x]/(x²)`: basis 1, x.
    fn dual_numbers() -> (DgSpace, MultilinearMap) {
        let space = GradedSpace::from_parities(&[Even, Even]);
        let m = product(&space, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)]);
        (DgSpace::with_zero_differential(space), m)
    }

    /// Exterior algebra on one odd generator: basis 1, ξ.
    fn exterior() -> (DgSpace, MultilinearMap) {
        let space = GradedSpace::from_parities(&[Even, Odd]);
        let m = product(&space, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)]);
        (DgSpace::with_zero_differential(space), m)
    }

    #[test]
    fn dga_passes_stasheff() {
        for (v, m) in [dual_numbers(), exterior()] {
            let a = AInfinityStructure::from_dga(v, &m, 4).unwrap();
            assert!(check_stasheff(&a).unwrap().passes());
        }
    }

    #[test]
    fn dga_with_differential_passes_stasheff() {
        // k[x]/(x²) ⊗ Λ(ξ) with dξ = x: basis 1, x, ξ, xξ
        let space = GradedSpace::from_parities(&[Even, Even, Odd, Odd]);
        let m = product(
            &space,
            &[
                (0, 0, 0, 1),
                (0, 1, 1, 1),
                (1, 0, 1, 1),
                (0, 2, 2, 1),
                (2, 0, 2, 1),
                (0, 3, 3, 1),
                (3, 0, 3, 1),
                (1, 2, 3, 1),
                (2, 1, 3, 1),
            ],
        );
        let mut d = Matrix::zeros(4, 4);
        d[(1, 2)] = int(1);
        let v = DgSpace::new(space, d).unwrap();
        let a = AInfinityStructure::from_dga(v, &m, 3).unwrap();
        assert!(check_stasheff(&a).unwrap().passes());
    }

    #[test]
    fn nonassociative_fails_at_three() {
        let space = GradedSpace::from_parities(&[Even, Even]);
        // x·x = 1 and 1 acts as a unit only on the left
        let m = product(&space, &[(0, 0, 0, 1), (0, 1, 1, 1), (1, 1, 0, 1)]);
        let a =
            AInfinityStructure::from_dga(DgSpace::with_zero_differential(space), &m, 3).unwrap();
        let report = check_stasheff(&a).unwrap();
        assert!(report.arities[0].pass && report.arities[1].pass);
        let fail = report.first_failure().unwrap();
        assert_eq!(fail.n, 3);
        assert!(fail.witness.is_some());
    }

    #[test]
    fn one_dim_cyclic_tensor_single_entry() {
        let space = GradedSpace::from_parities(&[Even]);
        let m = product(&space, &[(0, 0, 0, 1)]);
        let a = AInfinityStructure::from_dga(DgSpace::with_zero_differential(space.clone()), &m, 2)
            .unwrap();
        let b =
            BilinearForm::new(space, Even, Symmetry::Symmetric, Matrix::from_i64(&[&[1]])).unwrap();
        let t = cyclic_tensor(&a, &b, 2).unwrap();
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.get(&[0, 0, 0]), int(1));
        assert!(check_cyclic(&a, &b).unwrap().passes());
    }

    #[test]
    fn zero_form_gives_zero_tensor_and_vacuous_cyclicity() {
        let (v, m) = exterior();
        let b = BilinearForm::zero(v.space());
        let a = AInfinityStructure::from_dga(v, &m, 3).unwrap();
        assert!(cyclic_tensor(&a, &b, 2).unwrap().entries.is_empty());
        assert!(check_cyclic(&a, &b).unwrap().passes());
    }

    #[test]
    fn cyclic_tensor_arity_range() {
        let (v, m) = exterior();
        let b = BilinearForm::zero(v.space());
        let a = AInfinityStructure::from_dga(v, &m, 3).unwrap();
        assert!(matches!(
            cyclic_tensor(&a, &b, 1),
            Err(Error::ArityOutOfRange { .. })
        ));
        assert!(matches!(
            cyclic_tensor(&a, &b, 4),
            Err(Error::ArityOutOfRange { .. })
        ));
    }

    #[test]
    fn frobenius_algebras_are_cyclic() {
        // trace pairing picks the top class; exterior needs an odd form
        let (v, m) = dual_numbers();
        let b = BilinearForm::new(
            v.space().clone(),
            Even,
            Symmetry::Symmetric,
            Matrix::from_i64(&[&[0, 1], &[1, 0]]),
        )
        .unwrap();
        let a = AInfinityStructure::from_dga(v, &m, 3).unwrap();
        assert!(check_cyclic(&a, &b).unwrap().passes());

        let (v, m) = exterior();
        let b = BilinearForm::new(
            v.space().clone(),
            Odd,
            Symmetry::Symmetric,
            Matrix::from_i64(&[&[0, 1], &[1, 0]]),
        )
        .unwrap();
        let a = AInfinityStructure::from_dga(v, &m, 3).unwrap();
        assert!(check_cyclic(&a, &b).unwrap().passes());
    }

    #[test]
    fn perturbed_product_breaks_cyclicity() {
        let (v, mut m) = dual_numbers();
        m.add_entry(vec![0, 1], 1, int(1)).unwrap();
        let b = BilinearForm::new(
            v.space().clone(),
            Even,
            Symmetry::Symmetric,
            Matrix::from_i64(&[&[0, 1], &[1, 0]]),
        )
        .unwrap();
        let a = AInfinityStructure::from_dga(v, &m, 2).unwrap();
        let report = check_cyclic(&a, &b).unwrap();
        let fail = report.first_failure().unwrap();
        assert_eq!(fail.n, 2);
        let w = fail.witness.as_ref().unwrap();
        assert!(w.index.contains(&1) && w.index.contains(&0));
    }

    #[test]
    fn full_rotation_has_trivial_sign() {
        let shifted = GradedSpace::from_parities(&[Even, Odd, Odd]);
        let index = vec![1, 2, 0, 1];
        let mut current = index.clone();
        let mut total = Sign::Plus;
        for _ in 0..index.len() {
            total = total * rotation_sign(&shifted, &current);
            current = rotate(&current);
        }
        assert_eq!(current, index);
        assert_eq!(total, Sign::Plus);
    }

    #[test]
    fn with_cutoff_extends_and_refuses_to_drop() {
        let (v, m) = dual_numbers();
        let a = AInfinityStructure::from_dga(v, &m, 2).unwrap();
        let b = a.with_cutoff(5).unwrap();
        assert_eq!(b.cutoff(), 5);
        assert!(b.m(5).unwrap().is_zero());
        assert_eq!(b.top_arity(), 2);
        assert!(b.with_cutoff(2).is_ok());
        assert!(matches!(
            AInfinityStructure::new(a.underlying().clone(), 1, vec![]),
            Err(Error::ArityOutOfRange { .. })
        ));
    }

    #[test]
    fn check_form_sign_cases() {
        // a even, b odd, d(b) = a; only the odd forms can pair a with b
        let space = GradedSpace::from_parities(&[Even, Odd]);
        let v = DgSpace::new(space.clone(), Matrix::from_i64(&[&[0, 1], &[0, 0]])).unwrap();
        for (symmetry, c, expected) in [
            (Symmetry::Symmetric, 1, true),
            (Symmetry::Symmetric, -1, false),
            (Symmetry::Antisymmetric, -1, true),
            (Symmetry::Antisymmetric, 1, false),
        ] {
            let b = BilinearForm::new_unchecked(
                space.clone(),
                Odd,
                symmetry,
                Matrix::from_i64(&[&[0, 1], &[c, 0]]),
            )
            .unwrap();
            let report = check_form(&v, &b).unwrap();
            assert_eq!(report.symmetric, expected, "{symmetry:?} {c}");
        }
    }
}
