//! Sparse homogeneous multilinear maps and the Koszul sign rule.
//!
//! Maps act on tensor products with the usual convention: applying `f` to the slots after
//! `a_1 ⊗ ... ⊗ a_i` moves `f` past those factors and costs `(-1)^{|f|(|a_1| + ... + |a_i|)}`.
//! Both [`slot_apply`] (on pure tensors) and [`MultilinearMap::compose_at`] (on whole maps)
//! use [`koszul_sign`], so the two routes agree by construction.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::{GradedMap, GradedSpace, GradedVector, Parity, Sign};
use crate::scalar::Scalar;

pub type SparseVector = BTreeMap<usize, Scalar>;

/// `(-1)^{|f| (|a_1| + ... + |a_i|)}` for a map of parity `f` moved past the given factors.
pub fn koszul_sign<I: IntoIterator<Item = Parity>>(f: Parity, passed: I) -> Sign {
    (f * Parity::sum(passed)).sign()
}

/// A homogeneous map `inputs[0] ⊗ ... ⊗ inputs[n-1] -> output`, stored as a sparse table
/// from input basis multi-indices to sparse output columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilinearMap {
    inputs: Vec<GradedSpace>,
    output: GradedSpace,
    parity: Parity,
    entries: BTreeMap<Vec<usize>, SparseVector>,
}

impl MultilinearMap {
    pub fn zero(inputs: Vec<GradedSpace>, output: GradedSpace, parity: Parity) -> Self {
        Self {
            inputs,
            output,
            parity,
            entries: BTreeMap::new(),
        }
    }

    /// Zero map `space^{⊗arity} -> space`.
    pub fn zero_on(space: &GradedSpace, arity: usize, parity: Parity) -> Self {
        Self::zero(vec![space.clone(); arity], space.clone(), parity)
    }

    pub fn from_linear(map: &GradedMap) -> Self {
        let mut out = Self::zero(
            vec![map.source().clone()],
            map.target().clone(),
            map.parity(),
        );
        let m = map.matrix();
        for j in 0..m.cols() {
            for i in 0..m.rows() {
                if !m[(i, j)].is_zero() {
                    out.entries
                        .entry(vec![j])
                        .or_default()
                        .insert(i, m[(i, j)].clone());
                }
            }
        }
        out
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    pub fn inputs(&self) -> &[GradedSpace] {
        &self.inputs
    }

    pub fn output(&self) -> &GradedSpace {
        &self.output
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, SparseVector> {
        &self.entries
    }

    /// Number of nonzero structure constants.
    pub fn nnz(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    /// Iterates `(input multi-index, output index, coefficient)` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&[usize], usize, &Scalar)> {
        self.entries
            .iter()
            .flat_map(|(k, col)| col.iter().map(move |(o, c)| (k.as_slice(), *o, c)))
    }

    fn expected_output_parity(&self, input: &[usize]) -> Parity {
        self.parity + Parity::sum(input.iter().zip(&self.inputs).map(|(&i, s)| s.parity(i)))
    }

    /// Adds `coeff` to the structure constant `input -> output`.
    pub fn add_entry(&mut self, input: Vec<usize>, output: usize, coeff: Scalar) -> Result<()> {
        if input.len() != self.arity() {
            return Err(Error::DimensionMismatch {
                expected: self.arity(),
                found: input.len(),
            });
        }
        for (&i, s) in input.iter().zip(&self.inputs) {
            if i >= s.dim() {
                return Err(Error::DimensionMismatch {
                    expected: s.dim(),
                    found: i + 1,
                });
            }
        }
        if output >= self.output.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.output.dim(),
                found: output + 1,
            });
        }
        if coeff.is_zero() {
            return Ok(());
        }
        if self.output.parity(output) != self.expected_output_parity(&input) {
            return Err(Error::NotHomogeneous {
                row: output,
                col: input.first().copied().unwrap_or(0),
                parity: self.parity,
            });
        }
        self.accumulate(input, output, coeff);
        Ok(())
    }

    fn accumulate(&mut self, input: Vec<usize>, output: usize, coeff: Scalar) {
        let col = self.entries.entry(input.clone()).or_default();
        let slot = col.entry(output).or_insert_with(Scalar::zero);
        *slot += coeff;
        if slot.is_zero() {
            col.remove(&output);
            if col.is_empty() {
                self.entries.remove(&input);
            }
        }
    }

    fn prune(&mut self) {
        self.entries.retain(|_, col| {
            col.retain(|_, c| !c.is_zero());
            !col.is_empty()
        });
    }

    pub fn apply_basis(&self, input: &[usize]) -> SparseVector {
        self.entries.get(input).cloned().unwrap_or_default()
    }

    pub fn coefficient(&self, input: &[usize], output: usize) -> Scalar {
        self.entries
            .get(input)
            .and_then(|c| c.get(&output))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Value on arbitrary vectors, by multilinear expansion.
    pub fn apply(&self, args: &[Vec<Scalar>]) -> Vec<Scalar> {
        assert_eq!(args.len(), self.arity(), "wrong number of arguments");
        let mut out = vec![Scalar::zero(); self.output.dim()];
        'entries: for (input, col) in &self.entries {
            let mut weight = Scalar::from_integer(1.into());
            for (&i, arg) in input.iter().zip(args) {
                let x = &arg[i];
                if x.is_zero() {
                    continue 'entries;
                }
                weight *= x;
            }
            for (&o, c) in col {
                out[o] += &weight * c;
            }
        }
        out
    }

    pub fn add(&self, other: &MultilinearMap) -> Result<MultilinearMap> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (input, col) in &other.entries {
            for (&o, c) in col {
                out.accumulate(input.clone(), o, c.clone());
            }
        }
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &MultilinearMap) -> Result<()> {
        self.check_same_shape(other)?;
        for (input, col) in &other.entries {
            for (&o, c) in col {
                self.accumulate(input.clone(), o, c.clone());
            }
        }
        Ok(())
    }

    pub fn scale(&self, c: &Scalar) -> MultilinearMap {
        let mut out = self.clone();
        for col in out.entries.values_mut() {
            for x in col.values_mut() {
                *x *= c;
            }
        }
        out.prune();
        out
    }

    fn check_same_shape(&self, other: &MultilinearMap) -> Result<()> {
        if self.inputs != other.inputs || self.output != other.output {
            return Err(Error::SpaceMismatch(
                "multilinear maps of different shapes".into(),
            ));
        }
        if self.parity != other.parity && !self.is_zero() && !other.is_zero() {
            return Err(Error::ParityMismatch {
                expected: self.parity,
                found: other.parity,
            });
        }
        Ok(())
    }

    /// Partial composition `self ∘_slot g`: `g` is plugged into input `slot` (0-based),
    ///
    /// `(f ∘_i g)(x_0, ..., x_{n+m-2}) = (-1)^{|g|(|x_0| + ... + |x_{i-1}|)} f(x_0, ..., g(x_i, ..., x_{i+m-1}), ...)`.
    pub fn compose_at(&self, slot: usize, g: &MultilinearMap) -> Result<MultilinearMap> {
        if slot >= self.arity() {
            return Err(Error::SlotOutOfRange {
                slot,
                arity: 1,
                len: self.arity(),
            });
        }
        if &self.inputs[slot] != g.output() {
            return Err(Error::SpaceMismatch(format!(
                "slot {slot} does not accept the output of the inner map"
            )));
        }
        let mut inputs = self.inputs[..slot].to_vec();
        inputs.extend(g.inputs.iter().cloned());
        inputs.extend(self.inputs[slot + 1..].iter().cloned());
        let mut out = MultilinearMap::zero(inputs, self.output.clone(), self.parity + g.parity);

        // g's structure constants grouped by the basis vector they produce
        let mut by_output: BTreeMap<usize, Vec<(&Vec<usize>, &Scalar)>> = BTreeMap::new();
        for (input, col) in &g.entries {
            for (o, c) in col {
                by_output.entry(*o).or_default().push((input, c));
            }
        }

        for (outer, col) in &self.entries {
            let Some(inner) = by_output.get(&outer[slot]) else {
                continue;
            };
            let passed = outer[..slot]
                .iter()
                .zip(&self.inputs)
                .map(|(&i, s)| s.parity(i));
            let sign = koszul_sign(g.parity, passed);
            for (g_input, g_coeff) in inner {
                let mut key = outer[..slot].to_vec();
                key.extend(g_input.iter().copied());
                key.extend(outer[slot + 1..].iter().copied());
                let factor = sign.apply((*g_coeff).clone());
                for (&o, c) in col {
                    out.accumulate(key.clone(), o, &factor * c);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// `g ∘ self` for a linear map `g` applied to the output. No sign arises.
    pub fn post_compose(&self, g: &GradedMap) -> Result<MultilinearMap> {
        if g.source() != &self.output {
            return Err(Error::SpaceMismatch(
                "output does not match the source of the linear map".into(),
            ));
        }
        let m = g.matrix();
        let mut out = MultilinearMap::zero(
            self.inputs.clone(),
            g.target().clone(),
            self.parity + g.parity(),
        );
        for (input, col) in &self.entries {
            for (&o, c) in col {
                for i in 0..m.rows() {
                    let a = &m[(i, o)];
                    if !a.is_zero() {
                        out.accumulate(input.clone(), i, a * c);
                    }
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// Plugs the same linear map into every input, right to left.
    pub fn precompose_all(&self, g: &GradedMap) -> Result<MultilinearMap> {
        let g = MultilinearMap::from_linear(g);
        let mut out = self.clone();
        for slot in (0..self.arity()).rev() {
            out = out.compose_at(slot, &g)?;
        }
        Ok(out)
    }

    /// First nonzero structure constant, used as a witness by the verification suites.
    pub fn first_entry(&self) -> Option<(Vec<usize>, usize, Scalar)> {
        self.iter()
            .next()
            .map(|(k, o, c)| (k.to_vec(), o, c.clone()))
    }
}

/// Applies `f` to `args[slot..slot + arity(f)]` of the pure tensor `args`, leaving the other
/// factors untouched, and returns the Koszul sign separately from the resulting factors.
pub fn slot_apply(
    f: &MultilinearMap,
    slot: usize,
    args: &[GradedVector],
) -> Result<(Sign, Vec<GradedVector>)> {
    let arity = f.arity();
    if slot + arity > args.len() {
        return Err(Error::SlotOutOfRange {
            slot,
            arity,
            len: args.len(),
        });
    }
    let sign = koszul_sign(f.parity(), args[..slot].iter().map(|a| a.parity));
    let inner = &args[slot..slot + arity];
    let coords: Vec<Vec<Scalar>> = inner.iter().map(|a| a.coords.clone()).collect();
    let value = f.apply(&coords);
    let parity = f.parity() + Parity::sum(inner.iter().map(|a| a.parity));
    let mut out = args[..slot].to_vec();
    out.push(GradedVector {
        parity,
        coords: value,
    });
    out.extend(args[slot + arity..].iter().cloned());
    Ok((sign, out))
}
