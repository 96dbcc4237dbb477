#![allow(dead_code)]

use std::collections::BTreeSet;

use hodge_core::ainfty::AInfinityStructure;
use hodge_core::graded::{BilinearForm, GradedMap, Parity};
use hodge_core::matrix::Matrix;
use hodge_core::multilinear::MultilinearMap;
use hodge_core::samples::{CyclicDga, Dga};
use hodge_core::scalar::{self, Scalar};
use hodge_core::transfer::MinimalModel;
use num_traits::Zero;

pub fn data_path(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap()
}

/// Tree shapes for the brute-force enumeration.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Shape {
    Leaf,
    Node(Vec<Shape>),
}

impl Shape {
    pub fn render(&self) -> String {
        match self {
            Shape::Leaf => "x".into(),
            Shape::Node(c) => format!(
                "({})",
                c.iter().map(Shape::render).collect::<Vec<_>>().join(" ")
            ),
        }
    }
}

/// Every way to add one leaf: into any child list at any position, or by grafting a new
/// two-child vertex above any subtree.
fn grow(t: &Shape) -> Vec<Shape> {
    let mut out = vec![
        Shape::Node(vec![Shape::Leaf, t.clone()]),
        Shape::Node(vec![t.clone(), Shape::Leaf]),
    ];
    if let Shape::Node(children) = t {
        for pos in 0..=children.len() {
            let mut c = children.clone();
            c.insert(pos, Shape::Leaf);
            out.push(Shape::Node(c));
        }
        for (k, child) in children.iter().enumerate() {
            for g in grow(child) {
                let mut c = children.clone();
                c[k] = g;
                out.push(Shape::Node(c));
            }
        }
    }
    out
}

/// Trees with `n` leaves as canonical strings, grown leaf by leaf from the corolla on two leaves.
pub fn brute_force_trees(n: usize) -> BTreeSet<String> {
    let mut level: BTreeSet<Shape> = BTreeSet::new();
    level.insert(Shape::Node(vec![Shape::Leaf, Shape::Leaf]));
    for _ in 2..n {
        level = level.iter().flat_map(grow).collect();
    }
    level.iter().map(Shape::render).collect()
}

/// Little Schröder numbers from `k s_k = 3(2k-3) s_{k-1} - (k-3) s_{k-2}`, `s_1 = s_2 = 1`.
pub fn schroder(n: usize) -> u64 {
    let mut s = vec![0i64, 1, 1];
    for k in 3..=n as i64 {
        let next = (3 * (2 * k - 3) * s[k as usize - 1] - (k - 3) * s[k as usize - 2]) / k;
        s.push(next);
    }
    s[n] as u64
}

pub fn cyclic_structure(c: &CyclicDga, cutoff: usize) -> AInfinityStructure {
    AInfinityStructure::from_dga(c.dga.v.clone(), &c.dga.product, cutoff).unwrap()
}

fn product_on(dga: &Dga, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    dga.product.apply(&[x.to_vec(), y.to_vec()])
}

/// Induced product on homology, read on `ΠW`: for cycle representatives `w_i, w_j`, the class of
/// `w_i w_j` in the basis `w_k`, times the transport sign `(-1)^{|w_i|}`.
pub fn induced_product_mismatch(dga: &Dga, model: &MinimalModel) -> Option<String> {
    let n = dga.v.dim();
    let reps = model.basis.vectors.basis().to_vec();
    let parities = model.basis.vectors.parities();
    let boundaries = dga.v.d().matrix().image();
    let mut columns = reps.clone();
    columns.extend(boundaries);
    let frame = Matrix::from_columns(n, &columns);
    let m2 = model.structure.m(2).unwrap();
    for i in 0..reps.len() {
        for j in 0..reps.len() {
            let p = product_on(dga, &reps[i], &reps[j]);
            let coords = frame.solve(&p)?;
            for (k, coord) in coords.iter().take(reps.len()).enumerate() {
                let mut expected = coord.clone();
                if parities[i] == Parity::Odd {
                    expected = -expected;
                }
                let got = m2.coefficient(&[i, j], k);
                if got != expected {
                    return Some(format!(
                        "m2({i},{j})[{k}] = {} but the induced product gives {}",
                        scalar::format(&got),
                        scalar::format(&expected)
                    ));
                }
            }
        }
    }
    None
}

/// `m~_2` of two models agrees after identifying the harmonic bases through `π_2 ι_1`.
pub fn m2_agree(first: &MinimalModel, second: &MinimalModel) -> bool {
    let phi = second.basis.projection.matrix() * first.basis.inclusion.matrix();
    let dim = phi.cols();
    let m1 = first.structure.m(2).unwrap();
    let m2 = second.structure.m(2).unwrap();
    for i in 0..dim {
        for j in 0..dim {
            let mut lhs = vec![Scalar::zero(); dim];
            for (o, c) in m1.apply_basis(&[i, j]) {
                for r in 0..dim {
                    lhs[r] += &phi[(r, o)] * &c;
                }
            }
            let rhs = m2.apply(&[phi.column(i), phi.column(j)]);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Naive `A B` as explicit sums.
pub fn naive_product(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut acc = Scalar::zero();
            for k in 0..a.cols() {
                acc += &a[(i, k)] * &b[(k, j)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// `ω(m_n(v_0, ..., v_{n-1}), v_n)` by looping over every output index and every pairing entry.
pub fn cyclic_entry_by_loops(
    a: &AInfinityStructure,
    b: &BilinearForm,
    n: usize,
    index: &[usize],
) -> Scalar {
    let m = a.m(n).unwrap();
    let g = b.gram();
    let space = a.underlying().space();
    let mut total = Scalar::zero();
    let value = m.apply(
        &index[..n]
            .iter()
            .map(|&i| space.unit(i))
            .collect::<Vec<_>>(),
    );
    for (o, c) in value.iter().enumerate() {
        let mut w = c * &g[(o, index[n])];
        if space.parity(o) == Parity::Odd {
            w = -w;
        }
        total += w;
    }
    total
}

/// `λ_1 = ι`, `λ_n = sum over compositions of m_k ∘ (ŝλ_{n_1} ⊗ ... ⊗ ŝλ_{n_k})` with `ŝλ_1 = ι`
/// and `ŝλ_j = s λ_j`; the transferred operation is `π λ_n`.
pub fn recursive_transfer(
    a: &AInfinityStructure,
    leaf: &GradedMap,
    s: &GradedMap,
    root: &GradedMap,
    n: usize,
) -> MultilinearMap {
    let mut lambda: Vec<Option<MultilinearMap>> =
        vec![None, Some(MultilinearMap::from_linear(leaf))];
    for size in 2..=n {
        let mut total = MultilinearMap::zero(
            vec![leaf.source().clone(); size],
            a.shifted_space().clone(),
            Parity::Odd,
        );
        for comp in compositions(size) {
            if comp.len() < 2 {
                continue;
            }
            let mut term = a.m(comp.len()).unwrap().clone();
            for (slot, &part) in comp.iter().enumerate().rev() {
                let inner = if part == 1 {
                    lambda[1].clone().unwrap()
                } else {
                    lambda[part].as_ref().unwrap().post_compose(s).unwrap()
                };
                term = term.compose_at(slot, &inner).unwrap();
            }
            if !term.is_zero() {
                total.add_assign(&term).unwrap();
            }
        }
        lambda.push(Some(total));
    }
    lambda[n].as_ref().unwrap().post_compose(root).unwrap()
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for rest in compositions(n - first) {
            let mut c = vec![first];
            c.extend(rest);
            out.push(c);
        }
    }
    out
}
