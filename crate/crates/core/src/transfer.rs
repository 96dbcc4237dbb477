//! Tree-sum transfer of an A∞-structure along Hodge data, and the minimal model on the
//! harmonic subspace.
//!
//! A tree is evaluated with `t` (or the inclusion of `W`) on every leaf, `m_k` at every vertex
//! with `k` children, `s` on every internal edge and `t` (or the projection onto `W`) at the
//! root. `s` and `t` act on `ΠV` with unchanged coordinates.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::ainfty::{
    check_cyclic, check_form, check_stasheff, AInfinityStructure, CyclicReport, StasheffReport,
};
use crate::error::{Error, Result};
use crate::graded::{
    BilinearForm, DgSpace, GradedMap, GradedSpace, GradedVector, Parity, Sign, Subspace,
};
use crate::hodge::{verify, HodgeData};
use crate::multilinear::{slot_apply, MultilinearMap};
use crate::scalar::Scalar;
use crate::tree::{enumerate_trees, CompositionPlan, PlanStep, PlanarTree};

/// The three edge labels, already on parity-reversed spaces.
#[derive(Clone, Debug)]
pub struct EdgeMaps {
    /// `ΠX -> ΠV`, on every leaf.
    pub leaf: GradedMap,
    /// `ΠV -> ΠV`, odd, on every internal edge.
    pub inner: GradedMap,
    /// `ΠV -> ΠY`, at the root.
    pub root: GradedMap,
}

impl EdgeMaps {
    /// `t` on leaves and root, `s` inside.
    pub fn from_hodge(h: &HodgeData) -> Self {
        let t = h.t.on_reversed();
        Self {
            leaf: t.clone(),
            inner: h.s.on_reversed(),
            root: t,
        }
    }

    /// Leaves include `ΠW`, the root projects onto `ΠW` along `ker t`.
    pub fn harmonic(h: &HodgeData, w: &HarmonicBasis) -> Self {
        Self {
            leaf: w.inclusion.clone(),
            inner: h.s.on_reversed(),
            root: w.projection.clone(),
        }
    }
}

/// A homogeneous basis of `im t` and the maps `ι: ΠW -> ΠV`, `π: ΠV -> ΠW` with `ιπ = t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicBasis {
    pub vectors: Subspace,
    pub space: GradedSpace,
    pub inclusion: GradedMap,
    pub projection: GradedMap,
}

impl HarmonicBasis {
    pub fn of(h: &HodgeData) -> Result<Self> {
        let vectors = Subspace::image_of(&h.t);
        let space = GradedSpace::with_prefix("h", &vectors.parities());
        let basis = vectors.matrix();
        let coords = basis
            .solve_matrix(h.t.matrix())
            .ok_or_else(|| Error::Precondition("t does not map into its own image".into()))?;
        let shifted_v = h.t.source().reversed();
        let shifted_w = space.reversed();
        let inclusion = GradedMap::new(shifted_w.clone(), shifted_v.clone(), Parity::Even, basis)?;
        let projection = GradedMap::new(shifted_v, shifted_w, Parity::Even, coords)?;
        Ok(Self {
            vectors,
            space,
            inclusion,
            projection,
        })
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

fn check_vertex_arities(tree: &PlanarTree, a: &AInfinityStructure) -> Result<()> {
    if let Some(&k) = tree.vertex_arities().iter().find(|&&k| k > a.cutoff()) {
        return Err(Error::ArityOutOfRange {
            arity: k,
            min: 2,
            max: a.cutoff(),
        });
    }
    Ok(())
}

/// `m_T` as a tensor, built bottom-up by partial composition.
pub fn evaluate_tree_with(
    tree: &PlanarTree,
    a: &AInfinityStructure,
    maps: &EdgeMaps,
) -> Result<MultilinearMap> {
    if tree.is_leaf() || !tree.is_valid() {
        return Err(Error::ArityOutOfRange {
            arity: tree.leaves(),
            min: 2,
            max: usize::MAX,
        });
    }
    check_vertex_arities(tree, a)?;
    let leaf = MultilinearMap::from_linear(&maps.leaf);
    subtree(tree, a, maps, &leaf)?.post_compose(&maps.root)
}

fn subtree(
    tree: &PlanarTree,
    a: &AInfinityStructure,
    maps: &EdgeMaps,
    leaf: &MultilinearMap,
) -> Result<MultilinearMap> {
    let PlanarTree::Node(children) = tree else {
        return Ok(leaf.clone());
    };
    let mut out = a.m(children.len())?.clone();
    for (slot, child) in children.iter().enumerate().rev() {
        if out.is_zero() {
            break;
        }
        let inner = match child {
            PlanarTree::Leaf => leaf.clone(),
            PlanarTree::Node(_) => subtree(child, a, maps, leaf)?.post_compose(&maps.inner)?,
        };
        out = out.compose_at(slot, &inner)?;
    }
    if out.is_zero() {
        let inputs = vec![maps.leaf.source().clone(); tree.leaves()];
        return Ok(MultilinearMap::zero(
            inputs,
            a.shifted_space().clone(),
            Parity::Odd,
        ));
    }
    Ok(out)
}

/// `m_T` on `ΠV` with `t` on leaves and root.
pub fn evaluate_tree(
    tree: &PlanarTree,
    a: &AInfinityStructure,
    h: &HodgeData,
) -> Result<MultilinearMap> {
    evaluate_tree_with(tree, a, &EdgeMaps::from_hodge(h))
}

/// Runs a composition plan on a pure tensor of basis vectors of `ΠX`, applying each layer
/// with [`slot_apply`]. Returns the coordinates of the result in `ΠY`.
pub fn evaluate_plan(
    plan: &CompositionPlan,
    a: &AInfinityStructure,
    maps: &EdgeMaps,
    input: &[usize],
) -> Result<Vec<Scalar>> {
    if input.len() != plan.leaves {
        return Err(Error::DimensionMismatch {
            expected: plan.leaves,
            found: input.len(),
        });
    }
    let source = maps.leaf.source();
    let mut args: Vec<GradedVector> = input
        .iter()
        .map(|&i| GradedVector::basis(source, i))
        .collect();
    let mut sign = Sign::Plus;
    let mut apply = |f: &MultilinearMap, slot: usize, args: &mut Vec<GradedVector>| -> Result<()> {
        let (s, out) = slot_apply(f, slot, args)?;
        sign = sign * s;
        *args = out;
        Ok(())
    };

    let leaf = MultilinearMap::from_linear(&maps.leaf);
    for slot in (0..plan.leaves).rev() {
        apply(&leaf, slot, &mut args)?;
    }
    for layer in &plan.layers {
        let mut starts = Vec::with_capacity(layer.len());
        let mut pos = 0;
        for step in layer {
            starts.push(pos);
            pos += step.width();
        }
        for (step, &start) in layer.iter().zip(&starts).rev() {
            if let PlanStep::Vertex(k) = step {
                let op = a.m(*k)?.post_compose(&maps.inner)?;
                apply(&op, start, &mut args)?;
            }
        }
    }
    let root = a.m(plan.root)?.post_compose(&maps.root)?;
    apply(&root, 0, &mut args)?;
    let [result] = args.as_slice() else {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: args.len(),
        });
    };
    Ok(result
        .coords
        .iter()
        .map(|c| sign.apply(c.clone()))
        .collect())
}

/// The whole tensor of a plan, one basis multi-index at a time.
pub fn plan_tensor(
    plan: &CompositionPlan,
    a: &AInfinityStructure,
    maps: &EdgeMaps,
) -> Result<MultilinearMap> {
    let source = maps.leaf.source();
    let target = maps.root.target();
    let mut out = MultilinearMap::zero(
        vec![source.clone(); plan.leaves],
        target.clone(),
        Parity::Odd,
    );
    let dim = source.dim();
    if dim == 0 {
        return Ok(out);
    }
    let mut index = vec![0; plan.leaves];
    loop {
        for (o, c) in evaluate_plan(plan, a, maps, &index)?
            .into_iter()
            .enumerate()
        {
            if !c.is_zero() {
                out.add_entry(index.clone(), o, c)?;
            }
        }
        let mut k = plan.leaves;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            index[k] += 1;
            if index[k] < dim {
                break;
            }
            index[k] = 0;
        }
    }
}

/// `sum_T m_T` over all trees with `n` leaves.
pub fn tree_sum(
    a: &AInfinityStructure,
    maps: &EdgeMaps,
    n: usize,
    parallel: bool,
) -> Result<MultilinearMap> {
    let trees = enumerate_trees(n)?;
    let terms: Vec<MultilinearMap> = if parallel {
        trees
            .par_iter()
            .map(|t| evaluate_tree_with(t, a, maps))
            .collect::<Result<_>>()?
    } else {
        trees
            .iter()
            .map(|t| evaluate_tree_with(t, a, maps))
            .collect::<Result<_>>()?
    };
    let inputs = vec![maps.leaf.source().clone(); n];
    let mut total = MultilinearMap::zero(inputs, maps.root.target().clone(), Parity::Odd);
    for term in &terms {
        total.add_assign(term)?;
    }
    Ok(total)
}

fn transferred_ops(
    a: &AInfinityStructure,
    maps: &EdgeMaps,
    cutoff: usize,
    parallel: bool,
) -> Result<Vec<MultilinearMap>> {
    if cutoff < 2 || cutoff > a.cutoff() {
        return Err(Error::ArityOutOfRange {
            arity: cutoff,
            min: 2,
            max: a.cutoff(),
        });
    }
    (2..=cutoff)
        .map(|n| tree_sum(a, maps, n, parallel))
        .collect()
}

/// Transferred operations on `ΠV`; the differential becomes `td`, which factors through `im t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferredStructure {
    pub on_v: AInfinityStructure,
    /// Present when `dt = 0`: the same operations read on a basis of `im t`.
    pub harmonic: Option<(HarmonicBasis, AInfinityStructure)>,
}

/// `m~_n = sum_T m_T` for `2 <= n <= cutoff`. The cutoff may not exceed that of `a`
/// (use [`AInfinityStructure::with_cutoff`] to declare higher operations zero).
pub fn transfer(
    a: &AInfinityStructure,
    h: &HodgeData,
    cutoff: usize,
    parallel: bool,
) -> Result<TransferredStructure> {
    if h.s.source() != a.underlying().space() {
        return Err(Error::SpaceMismatch(
            "Hodge data and structure live on different spaces".into(),
        ));
    }
    let maps = EdgeMaps::from_hodge(h);
    let ops = transferred_ops(a, &maps, cutoff, parallel)?;
    let td = h.t.matrix() * a.underlying().d().matrix();
    let dg = DgSpace::new(a.underlying().space().clone(), td)?;
    let on_v = AInfinityStructure::new(dg, cutoff, ops.clone())?;

    let harmonic = if (a.underlying().d().matrix() * h.t.matrix()).is_zero() {
        let w = HarmonicBasis::of(h)?;
        let restricted = ops
            .iter()
            .map(|m| m.precompose_all(&w.inclusion)?.post_compose(&w.projection))
            .collect::<Result<Vec<_>>>()?;
        let structure = AInfinityStructure::new(
            DgSpace::with_zero_differential(w.space.clone()),
            cutoff,
            restricted,
        )?;
        Some((w, structure))
    } else {
        None
    };
    Ok(TransferredStructure { on_v, harmonic })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub cutoff: usize,
    pub stasheff: StasheffReport,
    pub cyclic: CyclicReport,
    /// `m~_1 = 0` on the harmonic basis.
    pub minimal: bool,
    pub form_nondegenerate: bool,
    /// Number of trees summed at each arity `2..=cutoff`.
    pub trees: Vec<usize>,
}

impl ModelReport {
    pub fn passes(&self) -> bool {
        self.stasheff.passes() && self.cyclic.passes() && self.minimal
    }
}

/// The cyclic minimal model on `W = im t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalModel {
    pub basis: HarmonicBasis,
    pub structure: AInfinityStructure,
    pub form: BilinearForm,
    pub report: ModelReport,
}

fn precondition(what: &str, detail: impl std::fmt::Debug) -> Error {
    Error::Precondition(format!("{what}: {detail:?}"))
}

/// Checks every precondition, sums trees directly on `ΠW` and verifies the result.
pub fn minimal_model(
    a: &AInfinityStructure,
    b: &BilinearForm,
    h: &HodgeData,
    cutoff: usize,
    parallel: bool,
) -> Result<MinimalModel> {
    let v = a.underlying();
    let axioms = verify(h, v, b)?;
    if !axioms.harmonious {
        return Err(Error::NotHarmonious);
    }
    if !axioms.is_hodge() {
        return Err(precondition("Hodge data fails an axiom", axioms.axioms()));
    }
    let form = check_form(v, b)?;
    if !form.passes() {
        return Err(precondition("form check failed", form));
    }
    let stasheff = check_stasheff(a)?;
    if let Some(f) = stasheff.first_failure() {
        return Err(precondition("input fails the Stasheff relations", f));
    }
    let cyclic = check_cyclic(a, b)?;
    if let Some(f) = cyclic.first_failure() {
        return Err(precondition("input is not cyclic", f));
    }

    let w = HarmonicBasis::of(h)?;
    let maps = EdgeMaps::harmonic(h, &w);
    let ops = transferred_ops(a, &maps, cutoff, parallel)?;
    let structure = AInfinityStructure::new(
        DgSpace::with_zero_differential(w.space.clone()),
        cutoff,
        ops,
    )?;
    let restricted = b.restrict(&w.vectors)?;
    let form = BilinearForm::new_unchecked(
        w.space.clone(),
        restricted.parity(),
        restricted.symmetry(),
        restricted.gram().clone(),
    )?;

    let minimal = (w.projection.matrix() * &(v.d().matrix() * w.inclusion.matrix())).is_zero();
    let report = ModelReport {
        cutoff,
        stasheff: check_stasheff(&structure)?,
        cyclic: check_cyclic(&structure, &form)?,
        minimal,
        form_nondegenerate: form.is_nondegenerate(),
        trees: (2..=cutoff)
            .map(|n| enumerate_trees(n).map(|t| t.len()))
            .collect::<Result<_>>()?,
    };
    Ok(MinimalModel {
        basis: w,
        structure,
        form,
        report,
    })
}

/// Zero-dimensional with no operations.
pub fn is_empty_model(m: &MinimalModel) -> bool {
    m.basis.dim() == 0 && m.structure.higher_ops().iter().all(MultilinearMap::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::Symmetry;
    use crate::hodge::build_harmonious;
    use crate::matrix::Matrix;
    use crate::scalar::int;
    use crate::tree::PlanarTree::{Leaf, Node};
    use Parity::{Even, Odd};

    fn dual_numbers(cutoff: usize) -> (AInfinityStructure, BilinearForm) {
        let space = GradedSpace::from_parities(&[Even, Even]);
        let mut m = MultilinearMap::zero_on(&space, 2, Even);
        for (x, y, o) in [(0, 0, 0), (0, 1, 1), (1, 0, 1)] {
            m.add_entry(vec![x, y], o, int(1)).unwrap();
        }
        let b = BilinearForm::new(
            space.clone(),
            Even,
            Symmetry::Symmetric,
            Matrix::from_i64(&[&[0, 1], &[1, 0]]),
        )
        .unwrap();
        (
            AInfinityStructure::from_dga(DgSpace::with_zero_differential(space), &m, cutoff)
                .unwrap(),
            b,
        )
    }

    /// `k[x]/(x²) ⊗ Λ(ξ)` with `dξ = x`, basis 1, x, ξ, xξ: homology is spanned by 1.
    fn acyclic_ideal(cutoff: usize) -> (AInfinityStructure, BilinearForm) {
        let space = GradedSpace::from_parities(&[Even, Even, Odd, Odd]);
        let mut m = MultilinearMap::zero_on(&space, 2, Even);
        for (x, y, o) in [
            (0, 0, 0),
            (0, 1, 1),
            (1, 0, 1),
            (0, 2, 2),
            (2, 0, 2),
            (0, 3, 3),
            (3, 0, 3),
            (1, 2, 3),
            (2, 1, 3),
        ] {
            m.add_entry(vec![x, y], o, int(1)).unwrap();
        }
        let mut d = Matrix::zeros(4, 4);
        d[(1, 2)] = int(1);
        let v = DgSpace::new(space.clone(), d).unwrap();
        // odd trace on xξ
        let mut g = Matrix::zeros(4, 4);
        for (i, j) in [(0, 3), (3, 0), (1, 2), (2, 1)] {
            g[(i, j)] = int(1);
        }
        let b = BilinearForm::new(space, Odd, Symmetry::Symmetric, g).unwrap();
        (AInfinityStructure::from_dga(v, &m, cutoff).unwrap(), b)
    }

    #[test]
    fn trivial_data_reproduces_input() {
        let (a, _) = dual_numbers(4);
        let h = HodgeData::trivial(a.underlying());
        let out = transfer(&a, &h, 4, false).unwrap();
        assert_eq!(out.on_v, a);
    }

    #[test]
    fn tensor_and_plan_routes_agree() {
        let (a, b) = acyclic_ideal(4);
        let h = build_harmonious(a.underlying(), &b).unwrap();
        let maps = EdgeMaps::from_hodge(&h);
        for n in 2..=4 {
            for tree in enumerate_trees(n).unwrap() {
                let plan = CompositionPlan::of(&tree).unwrap();
                assert_eq!(
                    plan_tensor(&plan, &a, &maps).unwrap(),
                    evaluate_tree_with(&tree, &a, &maps).unwrap(),
                    "{tree}"
                );
            }
        }
    }

    #[test]
    fn internal_edge_vanishes_when_s_is_zero() {
        let (a, _) = dual_numbers(3);
        let h = HodgeData::trivial(a.underlying());
        let tree = Node(vec![Leaf, Node(vec![Leaf, Leaf])]);
        assert!(evaluate_tree(&tree, &a, &h).unwrap().is_zero());
    }

    #[test]
    fn vertex_beyond_cutoff_rejected() {
        let (a, _) = dual_numbers(2);
        let h = HodgeData::trivial(a.underlying());
        let tree = PlanarTree::corolla(3).unwrap();
        assert!(matches!(
            evaluate_tree(&tree, &a, &h),
            Err(Error::ArityOutOfRange { .. })
        ));
        assert!(matches!(
            transfer(&a, &h, 3, false),
            Err(Error::ArityOutOfRange { .. })
        ));
    }

    #[test]
    fn minimal_model_of_acyclic_ideal() {
        let (a, b) = acyclic_ideal(4);
        let h = build_harmonious(a.underlying(), &b).unwrap();
        let model = minimal_model(&a, &b, &h, 4, false).unwrap();
        assert!(model.report.passes(), "{:?}", model.report);
        assert_eq!(model.basis.dim(), 2);
    }

    #[test]
    fn parallel_matches_sequential() {
        let (a, b) = acyclic_ideal(4);
        let h = build_harmonious(a.underlying(), &b).unwrap();
        assert_eq!(
            transfer(&a, &h, 4, true).unwrap(),
            transfer(&a, &h, 4, false).unwrap()
        );
    }

    #[test]
    fn non_harmonious_data_rejected() {
        let space = GradedSpace::from_parities(&[Even, Odd]);
        let v = DgSpace::new(space.clone(), Matrix::from_i64(&[&[0, 1], &[0, 0]])).unwrap();
        let a = AInfinityStructure::new(v.clone(), 2, vec![]).unwrap();
        let h = HodgeData::trivial(&v);
        let b = BilinearForm::zero(&space);
        assert!(matches!(
            minimal_model(&a, &b, &h, 2, false),
            Err(Error::NotHarmonious)
        ));
    }
}
