//! Planar rooted trees whose internal vertices have at least two children, and the layered
//! composition plans that evaluate them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Ordering is recursive lexicographic with `Leaf` first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

impl PlanarTree {
    pub fn node(children: Vec<PlanarTree>) -> Result<Self> {
        if children.len() < 2 {
            return Err(Error::ArityOutOfRange {
                arity: children.len(),
                min: 2,
                max: usize::MAX,
            });
        }
        Ok(PlanarTree::Node(children))
    }

    /// Root with `n` leaves attached directly.
    pub fn corolla(n: usize) -> Result<Self> {
        Self::node(vec![PlanarTree::Leaf; n])
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(c) => c.iter().map(PlanarTree::leaves).sum(),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, PlanarTree::Leaf)
    }

    /// Longest root-to-leaf path, counted in edges.
    pub fn height(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(c) => 1 + c.iter().map(PlanarTree::height).max().unwrap_or(0),
        }
    }

    /// Child counts of all internal vertices, preorder.
    pub fn vertex_arities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_arities(&mut out);
        out
    }

    fn collect_arities(&self, out: &mut Vec<usize>) {
        if let PlanarTree::Node(c) = self {
            out.push(c.len());
            for child in c {
                child.collect_arities(out);
            }
        }
    }

    /// Edges between two internal vertices.
    pub fn internal_edges(&self) -> usize {
        self.vertex_arities().len().saturating_sub(1)
    }

    pub fn is_valid(&self) -> bool {
        match self {
            PlanarTree::Leaf => true,
            PlanarTree::Node(c) => c.len() >= 2 && c.iter().all(PlanarTree::is_valid),
        }
    }

    /// `x` for a leaf, `(c1 c2 ...)` for a vertex.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        self.write_canonical(&mut s);
        s
    }

    fn write_canonical(&self, s: &mut String) {
        match self {
            PlanarTree::Leaf => s.push('x'),
            PlanarTree::Node(c) => {
                s.push('(');
                for (k, child) in c.iter().enumerate() {
                    if k > 0 {
                        s.push(' ');
                    }
                    child.write_canonical(s);
                }
                s.push(')');
            }
        }
    }

    /// Inverse of [`canonical`](Self::canonical); rejects vertices with fewer than two children.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_tree(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(parse_error(text, "trailing characters"));
        }
        if !tree.is_valid() {
            return Err(parse_error(
                text,
                "every vertex needs at least two children",
            ));
        }
        Ok(tree)
    }
}

fn parse_error(text: &str, message: &str) -> Error {
    Error::Parse {
        field: format!("tree {text:?}"),
        message: message.into(),
    }
}

fn parse_tree(tokens: &[char], pos: &mut usize) -> Result<PlanarTree> {
    let text: String = tokens.iter().collect();
    match tokens.get(*pos) {
        Some('x') => {
            *pos += 1;
            Ok(PlanarTree::Leaf)
        }
        Some('(') => {
            *pos += 1;
            let mut children = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some(')') => {
                        *pos += 1;
                        return Ok(PlanarTree::Node(children));
                    }
                    Some(_) => children.push(parse_tree(tokens, pos)?),
                    None => return Err(parse_error(&text, "unbalanced parentheses")),
                }
            }
        }
        _ => Err(parse_error(&text, "expected 'x' or '('")),
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl Serialize for PlanarTree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.canonical())
    }
}

impl<'de> Deserialize<'de> for PlanarTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        PlanarTree::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Every tree with `n` leaves, sorted and duplicate-free.
pub fn enumerate_trees(n: usize) -> Result<Vec<PlanarTree>> {
    if n < 2 {
        return Err(Error::ArityOutOfRange {
            arity: n,
            min: 2,
            max: usize::MAX,
        });
    }
    let mut trees: BTreeMap<usize, Vec<PlanarTree>> = BTreeMap::new();
    trees.insert(1, vec![PlanarTree::Leaf]);
    // forests[k]: ordered sequences of subtrees with k leaves in total
    let mut forests: Vec<Vec<Vec<PlanarTree>>> = vec![vec![Vec::new()]];
    for size in 1..=n {
        let mut seqs = Vec::new();
        for first in 1..=size {
            let heads: &[PlanarTree] = if first == size && size > 1 {
                &[]
            } else {
                &trees[&first]
            };
            for head in heads {
                for rest in &forests[size - first] {
                    let mut seq = Vec::with_capacity(rest.len() + 1);
                    seq.push(head.clone());
                    seq.extend(rest.iter().cloned());
                    seqs.push(seq);
                }
            }
        }
        if size >= 2 {
            let mut at_size: Vec<PlanarTree> = seqs
                .iter()
                .filter(|s| s.len() >= 2)
                .map(|s| PlanarTree::Node(s.clone()))
                .collect();
            at_size.sort();
            trees.insert(size, at_size);
            // the single-tree sequences of this size become available now
            seqs.extend(trees[&size].iter().map(|t| vec![t.clone()]));
        }
        forests.push(seqs);
    }
    Ok(trees.remove(&n).unwrap_or_default())
}

/// One factor of a layer: a run of identities or `s ∘ m_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PlanStep {
    Identity(usize),
    Vertex(usize),
}

impl PlanStep {
    /// Inputs consumed.
    pub fn width(&self) -> usize {
        match self {
            PlanStep::Identity(k) | PlanStep::Vertex(k) => *k,
        }
    }
}

/// `t m_root L_h ... L_1 t^{⊗n}`, with layer `L_k` applying `s m_j` at every non-root vertex of
/// height `k` and identities elsewhere. Identity runs are merged.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CompositionPlan {
    pub leaves: usize,
    /// Bottom layer first.
    pub layers: Vec<Vec<PlanStep>>,
    pub root: usize,
}

impl CompositionPlan {
    pub fn of(tree: &PlanarTree) -> Result<Self> {
        let PlanarTree::Node(root_children) = tree else {
            return Err(Error::ArityOutOfRange {
                arity: 1,
                min: 2,
                max: usize::MAX,
            });
        };
        if !tree.is_valid() {
            return Err(Error::ArityOutOfRange {
                arity: 1,
                min: 2,
                max: usize::MAX,
            });
        }
        // subtrees already evaluated, left to right; initially the leaves
        fn push_leaves<'a>(t: &'a PlanarTree, out: &mut Vec<&'a PlanarTree>) {
            match t {
                PlanarTree::Leaf => out.push(t),
                PlanarTree::Node(c) => c.iter().for_each(|ch| push_leaves(ch, out)),
            }
        }
        let mut frontier = Vec::new();
        push_leaves(tree, &mut frontier);

        let mut layers = Vec::new();
        for level in 1..tree.height() {
            let mut steps = Vec::new();
            let mut next = Vec::new();
            let mut k = 0;
            while k < frontier.len() {
                match owner_at(tree, frontier[k], level) {
                    Some((vertex, width)) => {
                        steps.push(PlanStep::Vertex(width));
                        next.push(vertex);
                        k += width;
                    }
                    None => {
                        steps.push(PlanStep::Identity(1));
                        next.push(frontier[k]);
                        k += 1;
                    }
                }
            }
            frontier = next;
            layers.push(merge_identities(steps));
        }
        Ok(CompositionPlan {
            leaves: tree.leaves(),
            layers,
            root: root_children.len(),
        })
    }

    /// `t m_4 (id ⊗ s m_2 ⊗ id^{⊗2}) (s m_2 ⊗ id ⊗ s m_3 ⊗ id^{⊗2}) t^{⊗8}`.
    pub fn render(&self) -> String {
        let mut parts = vec![format!("t m_{}", self.root)];
        for layer in self.layers.iter().rev() {
            let factors: Vec<String> = layer
                .iter()
                .map(|step| match step {
                    PlanStep::Identity(1) => "id".to_string(),
                    PlanStep::Identity(k) => format!("id^{{⊗{k}}}"),
                    PlanStep::Vertex(k) => format!("s m_{k}"),
                })
                .collect();
            parts.push(format!("({})", factors.join(" ⊗ ")));
        }
        parts.push(if self.leaves == 1 {
            "t".into()
        } else {
            format!("t^{{⊗{}}}", self.leaves)
        });
        parts.join(" ")
    }

    /// Arities of every `s m_k` factor, in application order.
    pub fn vertex_steps(&self) -> impl Iterator<Item = usize> + '_ {
        self.layers.iter().flatten().filter_map(|s| match s {
            PlanStep::Vertex(k) => Some(*k),
            PlanStep::Identity(_) => None,
        })
    }
}

fn merge_identities(steps: Vec<PlanStep>) -> Vec<PlanStep> {
    let mut out: Vec<PlanStep> = Vec::new();
    for step in steps {
        match (out.last_mut(), &step) {
            (Some(PlanStep::Identity(a)), PlanStep::Identity(b)) => *a += b,
            _ => out.push(step),
        }
    }
    out
}

/// The non-root vertex of height `level` whose first child is `first`,
/// together with its child count.
fn owner_at<'a>(
    root: &'a PlanarTree,
    first: &'a PlanarTree,
    level: usize,
) -> Option<(&'a PlanarTree, usize)> {
    let parent = parent_of(root, first)?;
    if std::ptr::eq(parent, root) || parent.height() != level {
        return None;
    }
    let PlanarTree::Node(children) = parent else {
        return None;
    };
    if !std::ptr::eq(&children[0], first) {
        return None;
    }
    Some((parent, children.len()))
}

fn parent_of<'a>(root: &'a PlanarTree, target: &'a PlanarTree) -> Option<&'a PlanarTree> {
    let PlanarTree::Node(children) = root else {
        return None;
    };
    for child in children {
        if std::ptr::eq(child, target) {
            return Some(root);
        }
        if let Some(p) = parent_of(child, target) {
            return Some(p);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use PlanarTree::Leaf;

    fn node(c: Vec<PlanarTree>) -> PlanarTree {
        PlanarTree::Node(c)
    }

    pub(crate) fn sample_tree() -> PlanarTree {
        node(vec![
            node(vec![Leaf, Leaf]),
            node(vec![Leaf, node(vec![Leaf, Leaf, Leaf])]),
            Leaf,
            Leaf,
        ])
    }

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (2..=5).map(|n| enumerate_trees(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 3, 11, 45]);
    }

    #[test]
    fn three_leaves() {
        let names: Vec<String> = enumerate_trees(3)
            .unwrap()
            .iter()
            .map(PlanarTree::canonical)
            .collect();
        assert_eq!(names, vec!["(x x x)", "(x (x x))", "((x x) x)"]);
    }

    #[test]
    fn fewer_than_two_leaves_rejected() {
        assert!(enumerate_trees(1).is_err());
        assert!(enumerate_trees(0).is_err());
    }

    #[test]
    fn canonical_round_trip() {
        let t = sample_tree();
        assert_eq!(t.canonical(), "((x x) (x (x x x)) x x)");
        assert_eq!(PlanarTree::parse(&t.canonical()).unwrap(), t);
        assert!(PlanarTree::parse("(x)").is_err());
        assert!(PlanarTree::parse("(x x").is_err());
        assert!(PlanarTree::parse("(x x))").is_err());
    }

    #[test]
    fn sample_plan() {
        let t = sample_tree();
        let plan = CompositionPlan::of(&t).unwrap();
        assert_eq!(
            plan.render(),
            "t m_4 (id ⊗ s m_2 ⊗ id^{⊗2}) (s m_2 ⊗ id ⊗ s m_3 ⊗ id^{⊗2}) t^{⊗8}"
        );
    }

    #[test]
    fn corolla_plan() {
        let plan = CompositionPlan::of(&PlanarTree::corolla(2).unwrap()).unwrap();
        assert!(plan.layers.is_empty());
        assert_eq!(plan.render(), "t m_2 t^{⊗2}");
    }

    #[test]
    fn tree_statistics() {
        let t = sample_tree();
        assert_eq!(t.leaves(), 8);
        assert_eq!(t.height(), 3);
        assert_eq!(t.vertex_arities(), vec![4, 2, 2, 3]);
        assert_eq!(t.internal_edges(), 3);
    }
}
