//! Hierarchic wave functions: full p-ary trees whose nodes carry complex
//! component blocks of a fixed dimension `M`.
//!
//! Level `ℓ` of a depth-`L` tree has `p^ℓ` nodes, stored level by level. A
//! node is addressed by its branch path `[a_0, …, a_{ℓ-1}]`; inside a level the
//! path is read as a base-p number with `a_0` most significant, so the
//! children of node `i` are `p·i .. p·i + p`.
//!
//! Nodes may be absent while a state is being built with the creation
//! constructors. Algebraic operations treat absent nodes as zero blocks.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{simplex_address, PadicError, PadicNumber};

/// Upper bound on `M · (number of nodes)`.
pub const MAX_ENTRIES: usize = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HierarchicError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch(Shape, Shape),
    #[error("invalid path {path:?}: {reason}")]
    InvalidPath { path: Vec<u32>, reason: String },
    #[error("component label {label} out of range for blocks of dimension {dim}")]
    LabelOutOfRange { label: usize, dim: usize },
    #[error("cannot create part {0:?}: its entity does not exist")]
    MissingParent(Vec<u32>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cannot normalize a zero state")]
    ZeroNorm,
    #[error("block of length {got} where {dim} components are expected")]
    BlockLength { got: usize, dim: usize },
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    /// Branching number `p`.
    pub p: u32,
    /// Depth `L`: levels `0 ..= L`.
    #[serde(rename = "L")]
    pub depth: usize,
    /// Component dimension `M`.
    #[serde(rename = "M")]
    pub dim: usize,
}

impl Shape {
    pub fn new(p: u32, depth: usize, dim: usize) -> Result<Self, HierarchicError> {
        if p < 2 {
            return Err(HierarchicError::InvalidShape(format!("branching {p} < 2")));
        }
        if dim == 0 {
            return Err(HierarchicError::InvalidShape("component dimension 0".into()));
        }
        let shape = Shape { p, depth, dim };
        let nodes = shape
            .checked_node_count()
            .ok_or_else(|| HierarchicError::InvalidShape("tree too large".into()))?;
        if nodes.checked_mul(dim).is_none_or(|n| n > MAX_ENTRIES) {
            return Err(HierarchicError::InvalidShape(format!(
                "{nodes} nodes × {dim} components exceeds {MAX_ENTRIES}"
            )));
        }
        Ok(shape)
    }

    fn checked_node_count(&self) -> Option<usize> {
        let p = self.p as usize;
        let mut total = 0usize;
        let mut width = 1usize;
        for _ in 0..=self.depth {
            total = total.checked_add(width)?;
            width = width.checked_mul(p)?;
        }
        Some(total)
    }

    pub fn node_count(&self) -> usize {
        self.checked_node_count().expect("validated shape")
    }

    pub fn level_width(&self, level: usize) -> usize {
        (self.p as usize).pow(level as u32)
    }

    /// Position of the first node of `level` in level order.
    pub fn level_offset(&self, level: usize) -> usize {
        (0..level).map(|l| self.level_width(l)).sum()
    }

    /// Level-order position of the node at `path`.
    pub fn node_index(&self, path: &[u32]) -> Result<usize, HierarchicError> {
        if path.len() > self.depth {
            return Err(HierarchicError::InvalidPath {
                path: path.to_vec(),
                reason: format!("deeper than L = {}", self.depth),
            });
        }
        if let Some(d) = path.iter().find(|&&d| d >= self.p) {
            return Err(HierarchicError::InvalidPath {
                path: path.to_vec(),
                reason: format!("branch {d} out of range for p = {}", self.p),
            });
        }
        let within = path.iter().fold(0usize, |acc, &d| acc * self.p as usize + d as usize);
        Ok(self.level_offset(path.len()) + within)
    }

    /// Branch path of the node at level-order position `index`.
    pub fn node_path(&self, index: usize) -> Vec<u32> {
        let mut level = 0;
        let mut rest = index;
        while rest >= self.level_width(level) {
            rest -= self.level_width(level);
            level += 1;
        }
        let p = self.p as usize;
        let mut path = vec![0u32; level];
        for slot in path.iter_mut().rev() {
            *slot = (rest % p) as u32;
            rest /= p;
        }
        path
    }
}

/// Weight given to a level in the scalar product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelWeighting {
    /// Weight 1 on every node.
    Flat,
    /// Weight `p^(-ℓ)` on level `ℓ`, the Haar measure of a level-ℓ cell of Z_p.
    Measure,
}

impl LevelWeighting {
    pub fn weight(&self, p: u32, level: usize) -> f64 {
        match self {
            LevelWeighting::Flat => 1.0,
            LevelWeighting::Measure => (p as f64).powi(-(level as i32)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicState {
    shape: Shape,
    nodes: Vec<Option<Vec<Complex64>>>,
}

/// Outcome of annihilating an entity.
#[derive(Debug, Clone, PartialEq)]
pub enum Annihilation {
    /// The entity was not present: `a|ψ⟩ = 0`.
    Zero,
    /// The entity was removed. `remainder` is what is left of the tree and
    /// `parts` are the subtrees of its existing parts, each as a state in its
    /// own right.
    Decay {
        remainder: HierarchicState,
        parts: Vec<HierarchicState>,
    },
}

fn basis(dim: usize, label: usize) -> Result<Vec<Complex64>, HierarchicError> {
    if label >= dim {
        return Err(HierarchicError::LabelOutOfRange { label, dim });
    }
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[label] = Complex64::new(1.0, 0.0);
    Ok(v)
}

impl HierarchicState {
    /// The empty tree `|0⟩`: no node exists.
    pub fn vacuum(shape: Shape) -> Self {
        HierarchicState {
            shape,
            nodes: vec![None; shape.node_count()],
        }
    }

    /// A full tree of zero blocks.
    pub fn zeros(shape: Shape) -> Self {
        HierarchicState {
            shape,
            nodes: vec![Some(vec![Complex64::new(0.0, 0.0); shape.dim]); shape.node_count()],
        }
    }

    /// A full tree with the block at each node given by `block(path)`.
    pub fn from_fn(shape: Shape, mut block: impl FnMut(&[u32]) -> Vec<Complex64>) -> Result<Self, HierarchicError> {
        let mut nodes = Vec::with_capacity(shape.node_count());
        for i in 0..shape.node_count() {
            let b = block(&shape.node_path(i));
            if b.len() != shape.dim {
                return Err(HierarchicError::BlockLength {
                    got: b.len(),
                    dim: shape.dim,
                });
            }
            nodes.push(Some(b));
        }
        Ok(HierarchicState { shape, nodes })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// The block at `path`, or `None` if that node has not been created.
    pub fn node(&self, path: &[u32]) -> Result<Option<&[Complex64]>, HierarchicError> {
        Ok(self.nodes[self.shape.node_index(path)?].as_deref())
    }

    pub fn is_full(&self) -> bool {
        self.nodes.iter().all(Option::is_some)
    }

    /// Zero-fills absent nodes.
    pub fn completed(&self) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); self.shape.dim];
        HierarchicState {
            shape: self.shape,
            nodes: self.nodes.iter().map(|n| Some(n.clone().unwrap_or_else(|| zero.clone()))).collect(),
        }
    }

    fn blocks(&self) -> impl Iterator<Item = (usize, Option<&[Complex64]>)> + '_ {
        let p = self.shape.p;
        let mut level = 0;
        let mut next_level_at = 1;
        self.nodes.iter().enumerate().map(move |(i, n)| {
            if i == next_level_at {
                level += 1;
                next_level_at += (p as usize).pow(level as u32);
            }
            (level, n.as_deref())
        })
    }

    fn check_shape(&self, other: &HierarchicState) -> Result<(), HierarchicError> {
        if self.shape != other.shape {
            return Err(HierarchicError::ShapeMismatch(self.shape, other.shape));
        }
        Ok(())
    }

    /// `a Ψ₁ + b Ψ₂` node by node; the result is a full tree.
    pub fn lin_comb(a: Complex64, s1: &Self, b: Complex64, s2: &Self) -> Result<Self, HierarchicError> {
        s1.check_shape(s2)?;
        let dim = s1.shape.dim;
        let zero = Complex64::new(0.0, 0.0);
        let nodes = s1
            .nodes
            .iter()
            .zip(&s2.nodes)
            .map(|(x, y)| {
                Some(
                    (0..dim)
                        .map(|k| {
                            let u = x.as_ref().map_or(zero, |v| v[k]);
                            let w = y.as_ref().map_or(zero, |v| v[k]);
                            a * u + b * w
                        })
                        .collect(),
                )
            })
            .collect();
        Ok(HierarchicState { shape: s1.shape, nodes })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        HierarchicState::lin_comb(c, self, Complex64::new(0.0, 0.0), self).expect("same shape")
    }

    /// `Σ_nodes w(ℓ) ⟨ψ₁|ψ₂⟩`, conjugate-linear in the first argument.
    pub fn inner(&self, other: &Self, w: LevelWeighting) -> Result<Complex64, HierarchicError> {
        self.check_shape(other)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for ((level, x), y) in self.blocks().zip(&other.nodes) {
            if let (Some(x), Some(y)) = (x, y) {
                let dot: Complex64 = x.iter().zip(y).map(|(u, v)| u.conj() * v).sum();
                acc += dot * w.weight(self.shape.p, level);
            }
        }
        Ok(acc)
    }

    pub fn norm2(&self, w: LevelWeighting) -> f64 {
        self.level_norms(w).iter().sum()
    }

    /// Weighted squared norm contributed by each level `0 ..= L`.
    pub fn level_norms(&self, w: LevelWeighting) -> Vec<f64> {
        let mut out = vec![0.0; self.shape.depth + 1];
        for (level, block) in self.blocks() {
            if let Some(b) = block {
                out[level] += w.weight(self.shape.p, level) * b.iter().map(|c| c.norm_sqr()).sum::<f64>();
            }
        }
        out
    }

    pub fn normalize(&self, w: LevelWeighting) -> Result<Self, HierarchicError> {
        let n = self.norm2(w);
        if n <= 0.0 || !n.is_finite() {
            return Err(HierarchicError::ZeroNorm);
        }
        Ok(self.completed().scale(Complex64::new(1.0 / n.sqrt(), 0.0)))
    }

    /// `a⁺(C)|0⟩`: the entity at the root carrying basis component `label`.
    pub fn create_entity(shape: Shape, label: usize) -> Result<Self, HierarchicError> {
        let mut s = HierarchicState::vacuum(shape);
        s.nodes[0] = Some(basis(shape.dim, label)?);
        Ok(s)
    }

    /// `a⁺(B)` on the part at `path`. The enclosing node must already exist.
    /// An existing block gains the component `label`.
    pub fn create_part(&self, path: &[u32], label: usize) -> Result<Self, HierarchicError> {
        let index = self.shape.node_index(path)?;
        let Some((_, parent)) = path.split_last() else {
            return Err(HierarchicError::InvalidPath {
                path: vec![],
                reason: "the root is created with create_entity".into(),
            });
        };
        if self.nodes[self.shape.node_index(parent)?].is_none() {
            return Err(HierarchicError::MissingParent(path.to_vec()));
        }
        let e = basis(self.shape.dim, label)?;
        let mut s = self.clone();
        match &mut s.nodes[index] {
            Some(block) => block[label] += e[label],
            slot => *slot = Some(e),
        }
        Ok(s)
    }

    fn subtree_indices(&self, path: &[u32]) -> Result<Vec<(usize, Vec<u32>)>, HierarchicError> {
        // pairs (index in self, path relative to `path`)
        let mut out = Vec::new();
        let mut rel = vec![Vec::new()];
        for _ in path.len()..=self.shape.depth {
            let mut next = Vec::new();
            for r in &rel {
                let full: Vec<u32> = path.iter().chain(r.iter()).copied().collect();
                out.push((self.shape.node_index(&full)?, r.clone()));
                if full.len() < self.shape.depth {
                    for d in 0..self.shape.p {
                        let mut child = r.clone();
                        child.push(d);
                        next.push(child);
                    }
                }
            }
            rel = next;
        }
        Ok(out)
    }

    /// `a(C)` on the entity at `path`.
    ///
    /// Only free entities can decay: if the node at `path` sits inside an
    /// existing enclosing entity the operation is rejected, since removing a
    /// part from an intact whole has no defined meaning here.
    pub fn annihilate_entity(&self, path: &[u32]) -> Result<Annihilation, HierarchicError> {
        let index = self.shape.node_index(path)?;
        if self.nodes[index].is_none() {
            return Ok(Annihilation::Zero);
        }
        if let Some((_, parent)) = path.split_last() {
            if self.nodes[self.shape.node_index(parent)?].is_some() {
                return Err(HierarchicError::Unsupported(format!(
                    "annihilating part {path:?} inside an intact entity is questionable and not defined"
                )));
            }
        }
        let mut remainder = self.clone();
        remainder.nodes[index] = None;
        let mut parts = Vec::new();
        if path.len() < self.shape.depth {
            let part_shape = Shape::new(self.shape.p, self.shape.depth - path.len() - 1, self.shape.dim)?;
            for d in 0..self.shape.p {
                let mut child = path.to_vec();
                child.push(d);
                if self.nodes[self.shape.node_index(&child)?].is_none() {
                    continue;
                }
                let mut part = HierarchicState::vacuum(part_shape);
                for (i, rel) in self.subtree_indices(&child)? {
                    part.nodes[part_shape.node_index(&rel)?] = self.nodes[i].clone();
                    remainder.nodes[i] = None;
                }
                parts.push(part);
            }
        }
        Ok(Annihilation::Decay { remainder, parts })
    }

    /// `Ψ(x) = {ψ_{a0}, ψ_{a0 a1}, …}`: the blocks met along the branch path
    /// of a p-adic integer, levels `1 ..= L`. Absent nodes read as zero.
    pub fn evaluate_at(&self, x: &PadicNumber) -> Result<Vec<Vec<Complex64>>, HierarchicError> {
        if x.base().get() != self.shape.p {
            return Err(PadicError::BaseMismatch(x.base().get(), self.shape.p).into());
        }
        let path = simplex_address(x, self.shape.depth)?;
        let zero = vec![Complex64::new(0.0, 0.0); self.shape.dim];
        (1..=self.shape.depth)
            .map(|l| Ok(self.node(&path[..l])?.map_or_else(|| zero.clone(), <[Complex64]>::to_vec)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let file = StateFile {
            shape: self.shape,
            nodes: self
                .nodes
                .iter()
                .map(|n| n.as_ref().map(|b| b.iter().map(|c| [c.re, c.im]).collect()))
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, HierarchicError> {
        let file: StateFile = serde_json::from_str(s).map_err(|e| HierarchicError::Json(e.to_string()))?;
        let shape = Shape::new(file.shape.p, file.shape.depth, file.shape.dim)?;
        if file.nodes.len() != shape.node_count() {
            return Err(HierarchicError::Json(format!(
                "{} nodes listed, shape has {}",
                file.nodes.len(),
                shape.node_count()
            )));
        }
        let nodes = file
            .nodes
            .into_iter()
            .map(|n| match n {
                None => Ok(None),
                Some(b) if b.len() == shape.dim => Ok(Some(b.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())),
                Some(b) => Err(HierarchicError::BlockLength {
                    got: b.len(),
                    dim: shape.dim,
                }),
            })
            .collect::<Result<_, _>>()?;
        Ok(HierarchicState { shape, nodes })
    }
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    #[serde(flatten)]
    shape: Shape,
    nodes: Vec<Option<Vec<[f64; 2]>>>,
}

/// `|x⟩ = … a⁺(a_2) a⁺(a_1) a⁺(a_0)|0⟩` for a p-adic integer `x`: the nodes on
/// the branch path `a_0 a_1 … a_{L-1}` at levels `1 ..= L` carry the first
/// basis component; everything else, the root included, is absent.
pub fn state_from_padic(x: &PadicNumber, depth: usize, dim: usize) -> Result<HierarchicState, HierarchicError> {
    let shape = Shape::new(x.base().get(), depth, dim)?;
    let path = simplex_address(x, depth)?;
    let mut s = HierarchicState::vacuum(shape);
    for l in 1..=depth {
        let i = shape.node_index(&path[..l])?;
        s.nodes[i] = Some(basis(dim, 0)?);
    }
    Ok(s)
}

/// Single-level bosonic modes labelled by the cyclic group Z_p.
///
/// States are finite superpositions of occupation vectors. Labels are taken
/// modulo `p`, so `a⁺(p + i) = a⁺(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeState {
    p: u32,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl ModeState {
    pub fn vacuum(p: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; p as usize], Complex64::new(1.0, 0.0));
        ModeState { p, terms }
    }

    pub fn zero(p: u32) -> Self {
        ModeState { p, terms: BTreeMap::new() }
    }

    pub fn amplitude(&self, occupation: &[u32]) -> Complex64 {
        self.terms.get(occupation).copied().unwrap_or_default()
    }

    pub fn create(&self, label: i64) -> Self {
        let i = label.rem_euclid(self.p as i64) as usize;
        let mut out = ModeState::zero(self.p);
        for (occ, amp) in &self.terms {
            let mut next = occ.clone();
            next[i] += 1;
            *out.terms.entry(next).or_default() += amp * (occ[i] as f64 + 1.0).sqrt();
        }
        out
    }

    pub fn annihilate(&self, label: i64) -> Self {
        let i = label.rem_euclid(self.p as i64) as usize;
        let mut out = ModeState::zero(self.p);
        for (occ, amp) in &self.terms {
            if occ[i] == 0 {
                continue;
            }
            let mut next = occ.clone();
            next[i] -= 1;
            *out.terms.entry(next).or_default() += amp * (occ[i] as f64).sqrt();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (occ, amp) in &other.terms {
            *out.terms.entry(occ.clone()).or_default() -= amp;
        }
        out
    }

    /// Largest amplitude modulus of `self - other`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).terms.values().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// `[a(i), a⁺(j)]` applied to `self`.
    pub fn commutator(&self, i: i64, j: i64) -> Self {
        self.create(j).annihilate(i).sub(&self.annihilate(i).create(j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PrimeBase;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ones(p: u32, depth: usize) -> HierarchicState {
        HierarchicState::from_fn(Shape::new(p, depth, 1).unwrap(), |_| vec![c(1.0, 0.0)]).unwrap()
    }

    fn random_state(shape: Shape, seed: u64) -> HierarchicState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        HierarchicState::from_fn(shape, |_| {
            (0..shape.dim)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .unwrap()
    }

    fn int(n: i64, p: u32) -> PadicNumber {
        PadicNumber::from_integer(n, PrimeBase::new(p).unwrap(), 12).unwrap()
    }

    #[test]
    fn addressing() {
        let s = Shape::new(3, 3, 2).unwrap();
        assert_eq!(s.node_count(), 1 + 3 + 9 + 27);
        for i in 0..s.node_count() {
            assert_eq!(s.node_index(&s.node_path(i)).unwrap(), i);
        }
        assert_eq!(s.node_index(&[2, 1]).unwrap(), 4 + 7);
        assert!(s.node_index(&[3]).is_err());
        assert!(s.node_index(&[0, 0, 0, 0]).is_err());
        assert!(Shape::new(1, 2, 1).is_err());
        assert!(Shape::new(2, 2, 0).is_err());
        assert!(Shape::new(2, 40, 1).is_err());
    }

    #[test]
    fn worked_inner_products() {
        let s = ones(2, 1);
        assert_eq!(s.inner(&s, LevelWeighting::Flat).unwrap(), c(3.0, 0.0));
        assert_eq!(s.inner(&s, LevelWeighting::Measure).unwrap(), c(2.0, 0.0));
        assert_eq!(ones(2, 2).norm2(LevelWeighting::Measure), 3.0);
        let z = HierarchicState::zeros(Shape::new(3, 2, 2).unwrap());
        assert_eq!(z.norm2(LevelWeighting::Flat), 0.0);
        assert_eq!(z.normalize(LevelWeighting::Flat), Err(HierarchicError::ZeroNorm));
    }

    #[test]
    fn lin_comb_nodewise() {
        let shape = Shape::new(2, 3, 2).unwrap();
        let (s1, s2) = (random_state(shape, 1), random_state(shape, 2));
        let (a, b) = (c(0.5, -1.0), c(2.0, 0.25));
        let s = HierarchicState::lin_comb(a, &s1, b, &s2).unwrap();
        let path = [0, 1, 0];
        let (x, y, z) = (
            s1.node(&path).unwrap().unwrap(),
            s2.node(&path).unwrap().unwrap(),
            s.node(&path).unwrap().unwrap(),
        );
        for k in 0..2 {
            assert!((a * x[k] + b * y[k] - z[k]).norm() < 1e-15);
        }
        assert_eq!(HierarchicState::lin_comb(c(1.0, 0.0), &s1, c(0.0, 0.0), &s2).unwrap(), s1);
        let zero = HierarchicState::lin_comb(c(1.0, 0.0), &s1, c(-1.0, 0.0), &s1).unwrap();
        assert_eq!(zero.norm2(LevelWeighting::Flat), 0.0);
        let other = HierarchicState::zeros(Shape::new(2, 2, 2).unwrap());
        assert!(HierarchicState::lin_comb(a, &s1, b, &other).is_err());
    }

    #[test]
    fn level_weights_sum_to_one() {
        for p in [2, 3, 5] {
            for depth in 0..4 {
                let s = ones(p, depth);
                for n in s.level_norms(LevelWeighting::Measure) {
                    assert!((n - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn creation_and_decay() {
        let shape = Shape::new(2, 2, 2).unwrap();
        let vac = HierarchicState::vacuum(shape);
        let c1 = HierarchicState::create_entity(shape, 0).unwrap();
        match c1.annihilate_entity(&[]).unwrap() {
            Annihilation::Decay { remainder, parts } => {
                assert_eq!(remainder, vac);
                assert!(parts.is_empty());
            }
            Annihilation::Zero => panic!("entity exists"),
        }
        assert_eq!(vac.annihilate_entity(&[]).unwrap(), Annihilation::Zero);
        assert_eq!(vac.create_part(&[1], 0), Err(HierarchicError::MissingParent(vec![1])));

        let with_part = c1.create_part(&[1], 1).unwrap();
        let Annihilation::Decay { remainder, parts } = with_part.annihilate_entity(&[]).unwrap() else {
            panic!("entity exists")
        };
        assert_eq!(remainder, vac);
        let b1 = HierarchicState::create_entity(Shape::new(2, 1, 2).unwrap(), 1).unwrap();
        assert_eq!(parts, vec![b1]);

        assert!(matches!(with_part.annihilate_entity(&[1]), Err(HierarchicError::Unsupported(_))));
        assert!(matches!(
            HierarchicState::create_entity(shape, 5),
            Err(HierarchicError::LabelOutOfRange { .. })
        ));
    }

    #[test]
    fn decay_keeps_grandchildren() {
        let shape = Shape::new(2, 2, 1).unwrap();
        let s = HierarchicState::create_entity(shape, 0)
            .unwrap()
            .create_part(&[0], 0)
            .unwrap()
            .create_part(&[0, 1], 0)
            .unwrap();
        let Annihilation::Decay { parts, .. } = s.annihilate_entity(&[]).unwrap() else {
            panic!()
        };
        assert_eq!(parts.len(), 1);
        assert!(parts[0].node(&[]).unwrap().is_some());
        assert!(parts[0].node(&[1]).unwrap().is_some());
        assert!(parts[0].node(&[0]).unwrap().is_none());
    }

    #[test]
    fn padic_chains() {
        let x = state_from_padic(&int(0, 3), 3, 1).unwrap();
        for l in 1..=3 {
            assert!(x.node(&vec![0; l]).unwrap().is_some());
        }
        assert!(x.node(&[]).unwrap().is_none());
        let y = state_from_padic(&int(1 + 2 * 3, 3), 3, 1).unwrap();
        assert!(y.node(&[1, 2, 0]).unwrap().is_some());
        assert_eq!(y.evaluate_at(&int(7, 3)).unwrap(), vec![vec![c(1.0, 0.0)]; 3]);
        assert_eq!(y.evaluate_at(&int(8, 3)).unwrap()[2], vec![c(0.0, 0.0)]);
        let half = PadicNumber::from_rational(
            &crate::padic::PadicRationalInput::new(1, 3).unwrap(),
            PrimeBase::new(3).unwrap(),
            4,
        )
        .unwrap();
        assert!(state_from_padic(&half, 2, 1).is_err());
    }

    #[test]
    fn chain_overlap_counts_shared_levels() {
        // chains share the nodes of their common digit prefix
        let p = 3;
        let depth = 4;
        for x in 0..81i64 {
            for y in [0i64, 1, 5, 27, 80] {
                let (sx, sy) = (state_from_padic(&int(x, p), depth, 1).unwrap(), state_from_padic(&int(y, p), depth, 1).unwrap());
                let shared = (1..=depth as u32).filter(|&l| x % 3i64.pow(l) == y % 3i64.pow(l)).count();
                assert_eq!(sx.inner(&sy, LevelWeighting::Flat).unwrap(), c(shared as f64, 0.0));
                if x % 3 != y % 3 {
                    assert_eq!(sx.inner(&sy, LevelWeighting::Flat).unwrap(), c(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let shape = Shape::new(2, 2, 2).unwrap();
        let s = HierarchicState::create_entity(shape, 1).unwrap().create_part(&[0], 0).unwrap();
        assert_eq!(HierarchicState::from_json(&s.to_json()).unwrap(), s);
        let full = random_state(shape, 3);
        assert_eq!(HierarchicState::from_json(&full.to_json()).unwrap(), full);
    }

    #[test]
    fn cyclic_mode_commutator() {
        for p in [2u32, 3, 5] {
            let vac = ModeState::vacuum(p);
            for i in 0..p as i64 {
                for j in 0..p as i64 {
                    let expected = if i == j { vac.clone() } else { ModeState::zero(p) };
                    assert!(vac.commutator(i, j).distance(&expected) < 1e-12);
                    // labels live on Z_p
                    assert!(vac.commutator(i + p as i64, j - p as i64).distance(&expected) < 1e-12);
                }
            }
            assert!(vac.annihilate(0).distance(&ModeState::zero(p)) < 1e-15);
            let one = vac.create(1);
            assert!(one.annihilate(1).distance(&vac) < 1e-15);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn algebra_laws(seed in any::<u64>(), p in 2u32..=4, depth in 0usize..=3, dim in 1usize..=3,
                        a in (-2.0f64..2.0, -2.0f64..2.0), b in (-2.0f64..2.0, -2.0f64..2.0)) {
            let shape = Shape::new(p, depth, dim).unwrap();
            let (s1, s2, s3) = (random_state(shape, seed), random_state(shape, seed ^ 1), random_state(shape, seed ^ 2));
            let (a, b) = (c(a.0, a.1), c(b.0, b.1));
            let one = c(1.0, 0.0);
            for w in [LevelWeighting::Flat, LevelWeighting::Measure] {
                let combo = HierarchicState::lin_comb(a, &s1, b, &s2).unwrap();
                let lhs = combo.inner(&s3, w).unwrap();
                let rhs = a.conj() * s1.inner(&s3, w).unwrap() + b.conj() * s2.inner(&s3, w).unwrap();
                prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
                let sym = s1.inner(&s2, w).unwrap() - s2.inner(&s1, w).unwrap().conj();
                prop_assert!(sym.norm() < 1e-12);
                let n = s1.norm2(w);
                prop_assert!(n > 0.0);
                prop_assert!((s1.scale(a).norm2(w) - a.norm_sqr() * n).abs() < 1e-12 * (1.0 + n));
                prop_assert!((s1.normalize(w).unwrap().norm2(w) - 1.0).abs() < 1e-12);
            }
            // (s1 + s2) + s3 = s1 + (s2 + s3), a(s1 + s2) = a s1 + a s2
            let left = HierarchicState::lin_comb(one, &HierarchicState::lin_comb(one, &s1, one, &s2).unwrap(), one, &s3).unwrap();
            let right = HierarchicState::lin_comb(one, &s1, one, &HierarchicState::lin_comb(one, &s2, one, &s3).unwrap()).unwrap();
            let diff = HierarchicState::lin_comb(one, &left, -one, &right).unwrap();
            prop_assert!(diff.norm2(LevelWeighting::Flat).sqrt() < 1e-12);
            let dist = HierarchicState::lin_comb(a, &HierarchicState::lin_comb(one, &s1, one, &s2).unwrap(), -one,
                &HierarchicState::lin_comb(a, &s1, a, &s2).unwrap()).unwrap();
            prop_assert!(dist.norm2(LevelWeighting::Flat).sqrt() < 1e-12);
        }
    }
}
