//! Finite plane trees stored as out-degree sequences in lexicographic
//! (depth-first) order, with their path codings and the statistics attached
//! to the vertex of maximal out-degree.
//!
//! # Serialization
//!
//! A tree is serialized as its out-degree sequence in lexicographic order.
//! The CSV form is one comma-separated row per tree. The binary form is the
//! vertex count followed by each out-degree, all as unsigned LEB128 varints.

use std::io::{self, Read, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    Plain,
    Modified,
    Forest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LukasiewiczPath {
    values: Vec<i64>,
    kind: PathKind,
}

impl LukasiewiczPath {
    pub fn new(values: Vec<i64>, kind: PathKind) -> Result<Self> {
        match values.first() {
            Some(0) => {}
            _ => return Err(Error::MalformedPath("path must start at 0".into())),
        }
        if let Some(i) = values.windows(2).position(|w| w[1] - w[0] < -1) {
            return Err(Error::MalformedPath(format!("increment below -1 at step {}", i + 1)));
        }
        Ok(LukasiewiczPath { values, kind })
    }

    /// Path with `W_0 = 0` and the given increments.
    pub fn from_increments<I: IntoIterator<Item = i64>>(increments: I, kind: PathKind) -> Result<Self> {
        let mut values = vec![0i64];
        let mut w = 0i64;
        for x in increments {
            w += x;
            values.push(w);
        }
        Self::new(values, kind)
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn kind(&self) -> PathKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn increments(&self) -> impl Iterator<Item = i64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }

    /// First index at which the path equals `level`.
    pub fn first_hit(&self, level: i64) -> Option<usize> {
        self.values.iter().position(|&w| w == level)
    }
}

/// Height function recovered from a tree or forest path:
/// `H_i = #{k < i : W_k = min_{k ≤ j ≤ i} W_j}` for `0 ≤ i < len − 1`.
pub fn heights_from_path(values: &[i64]) -> Vec<u32> {
    let n = values.len().saturating_sub(1);
    let mut out = Vec::with_capacity(n);
    let mut stack: Vec<i64> = Vec::new();
    for &w in &values[..n] {
        while stack.last().is_some_and(|&top| top > w) {
            stack.pop();
        }
        out.push(stack.len() as u32);
        stack.push(w);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneTree {
    degrees: Vec<u32>,
}

impl PlaneTree {
    pub fn singleton() -> Self {
        PlaneTree { degrees: vec![0] }
    }

    /// Root with `k` leaf children.
    pub fn star(k: u32) -> Self {
        let mut degrees = vec![0; k as usize + 1];
        degrees[0] = k;
        PlaneTree { degrees }
    }

    /// Path of `n` vertices.
    pub fn chain(n: usize) -> Self {
        assert!(n >= 1);
        let mut degrees = vec![1; n];
        degrees[n - 1] = 0;
        PlaneTree { degrees }
    }

    pub fn from_degrees(degrees: Vec<u32>) -> Result<Self> {
        let mut w: i64 = 0;
        for (i, &k) in degrees.iter().enumerate() {
            w += k as i64 - 1;
            if w < 0 && i + 1 != degrees.len() {
                return Err(Error::MalformedPath(format!(
                    "degree sequence closes the tree after {} of {} vertices",
                    i + 1,
                    degrees.len()
                )));
            }
        }
        if degrees.is_empty() || w != -1 {
            return Err(Error::MalformedPath(format!(
                "degree sequence must sum to its length minus one (terminal value {w})"
            )));
        }
        Ok(PlaneTree { degrees })
    }

    pub(crate) fn from_degrees_unchecked(degrees: Vec<u32>) -> Self {
        debug_assert!(PlaneTree::from_degrees(degrees.clone()).is_ok());
        PlaneTree { degrees }
    }

    pub fn from_lukasiewicz(path: &LukasiewiczPath) -> Result<Self> {
        let degrees = path
            .increments()
            .map(|x| u32::try_from(x + 1).map_err(|_| Error::MalformedPath("increment below -1".into())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_degrees(degrees)
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn into_degrees(self) -> Vec<u32> {
        self.degrees
    }

    pub fn lukasiewicz(&self) -> LukasiewiczPath {
        let mut values = Vec::with_capacity(self.len() + 1);
        let mut w = 0i64;
        values.push(0);
        for &k in &self.degrees {
            w += k as i64 - 1;
            values.push(w);
        }
        LukasiewiczPath {
            values,
            kind: PathKind::Plain,
        }
    }

    /// Generation `|u(i)|` of every vertex.
    pub fn depths(&self) -> Vec<u32> {
        depths_of(&self.degrees)
    }

    /// `H_0..H_n` with the convention `H_n = 0`.
    pub fn height_function(&self) -> Vec<u32> {
        let mut h = self.depths();
        h.push(0);
        h
    }

    pub fn height(&self) -> u32 {
        self.depths().into_iter().max().unwrap_or(0)
    }

    /// Contour function at integer times `0..=2n`; zero on `[2(n − 1), 2n]`.
    pub fn contour(&self) -> Vec<u32> {
        let n = self.len();
        let mut out = Vec::with_capacity(2 * n + 1);
        let depths = self.depths();
        let mut c = 0u32;
        out.push(0);
        for &d in &depths[1..] {
            while c + 1 > d {
                c -= 1;
                out.push(c);
            }
            c = d;
            out.push(c);
        }
        while c > 0 {
            c -= 1;
            out.push(c);
        }
        out.extend([0, 0]);
        debug_assert_eq!(out.len(), 2 * n + 1);
        out
    }

    /// Number of vertices in the subtree rooted at each vertex.
    pub fn subtree_sizes(&self) -> Vec<u64> {
        subtree_sizes_of(&self.degrees)
    }

    /// Parent index of every vertex (`None` for the root).
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parents = vec![None; self.len()];
        let mut open: Vec<(usize, u32)> = Vec::new();
        for (i, &k) in self.degrees.iter().enumerate() {
            while open.last().is_some_and(|&(_, left)| left == 0) {
                open.pop();
            }
            if let Some((p, left)) = open.last_mut() {
                parents[i] = Some(*p);
                *left -= 1;
            }
            if k > 0 {
                open.push((i, k));
            }
        }
        parents
    }

    /// Indices of the children of vertex `i`, in order.
    pub fn children(&self, i: usize) -> Vec<usize> {
        let sizes = self.subtree_sizes();
        let mut out = Vec::with_capacity(self.degrees[i] as usize);
        let mut c = i + 1;
        for _ in 0..self.degrees[i] {
            out.push(c);
            c += sizes[c] as usize;
        }
        out
    }

    /// Ulam label of vertex `i` (child ranks starting at 1 along the ancestry).
    pub fn label(&self, i: usize) -> Vec<u32> {
        let parents = self.parents();
        let mut label = Vec::new();
        let mut v = i;
        while let Some(p) = parents[v] {
            let rank = self.children(p).iter().position(|&c| c == v).expect("child of parent") + 1;
            label.push(rank as u32);
            v = p;
        }
        label.reverse();
        label
    }

    /// Index of the vertex with the given label.
    pub fn index_of(&self, label: &[u32]) -> Option<usize> {
        let sizes = self.subtree_sizes();
        let mut v = 0usize;
        for &j in label {
            if j == 0 || j > self.degrees[v] {
                return None;
            }
            let mut c = v + 1;
            for _ in 1..j {
                c += sizes[c] as usize;
            }
            v = c;
        }
        Some(v)
    }

    /// First vertex (lexicographic order) of maximal out-degree.
    pub fn max_degree_vertex(&self) -> (usize, u32) {
        let mut best = (0, self.degrees[0]);
        for (i, &k) in self.degrees.iter().enumerate() {
            if k > best.1 {
                best = (i, k);
            }
        }
        best
    }

    /// `W̃`, its first argmin `I` and the first-hit times `ζ̃_1..ζ̃_Δ`.
    pub fn modified_path(&self) -> ModifiedPath {
        let n = self.len();
        let (u, delta) = self.max_degree_vertex();
        let incr = |i: usize| self.degrees[i] as i64 - 1;
        let mut values = Vec::with_capacity(n);
        values.push(0i64);
        let mut w = 0i64;
        for i in (u + 1..n).chain(0..u) {
            w += incr(i);
            values.push(w);
        }
        let mut pivot = 0usize;
        for (i, &v) in values.iter().enumerate() {
            if v < values[pivot] {
                pivot = i;
            }
        }
        let mut zeta_tilde = Vec::with_capacity(delta as usize);
        for (i, &v) in values.iter().enumerate() {
            if v == -(zeta_tilde.len() as i64 + 1) {
                zeta_tilde.push(i);
            }
        }
        ModifiedPath {
            path: LukasiewiczPath {
                values,
                kind: PathKind::Modified,
            },
            pivot,
            zeta_tilde,
        }
    }

    /// Forest `(𝒯_i, ..., 𝒯_j)` of subtrees under children `i..=j` of `u⋆`.
    pub fn subtree_forest(&self, i: usize, j: usize) -> Result<Forest> {
        let (u, delta) = self.max_degree_vertex();
        if i < 1 || i > j || j > delta as usize {
            return Err(Error::OutOfRange(format!(
                "subtree range {i}..={j} outside 1..={delta}"
            )));
        }
        let sizes = self.subtree_sizes();
        let mut trees = Vec::with_capacity(j - i + 1);
        let mut c = u + 1;
        for p in 1..=j {
            let s = sizes[c] as usize;
            if p >= i {
                trees.push(PlaneTree {
                    degrees: self.degrees[c..c + s].to_vec(),
                });
            }
            c += s;
        }
        Ok(Forest { trees })
    }

    pub fn stats(&self) -> TreeStats {
        let n = self.len();
        let depths = self.depths();
        let sizes = self.subtree_sizes();
        let (u, delta) = self.max_degree_vertex();
        let second_degree = {
            let mut top = [0u32; 2];
            let mut seen_max = false;
            for &k in &self.degrees {
                if k == delta && !seen_max {
                    seen_max = true;
                } else if k > top[1] {
                    top[1] = k;
                }
            }
            top[0] = delta;
            top[1]
        };
        let mut xi = Vec::with_capacity(delta as usize);
        let mut c = u + 1;
        for _ in 0..delta {
            xi.push(sizes[c]);
            c += sizes[c] as usize;
        }
        let z_partial: Vec<u64> = xi
            .iter()
            .scan(0u64, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect();
        let m = self.modified_path();
        TreeStats {
            size: n,
            delta,
            second_degree,
            u_star_index: u,
            u_star_generation: depths[u],
            height: depths.iter().copied().max().unwrap_or(0),
            xi,
            z_partial,
            pivot_i: m.pivot,
            zeta_tilde: m.zeta_tilde,
        }
    }

    pub fn to_csv_row(&self) -> String {
        let mut s = String::with_capacity(2 * self.len());
        for (i, k) in self.degrees.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(&k.to_string());
        }
        s
    }

    pub fn from_csv_row(row: &str) -> Result<Self> {
        let degrees = row
            .trim()
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::MalformedPath(format!("bad degree `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_degrees(degrees)
    }

    pub fn write_binary<W: Write>(&self, out: &mut W) -> io::Result<()> {
        write_varint(out, self.len() as u64)?;
        for &k in &self.degrees {
            write_varint(out, k as u64)?;
        }
        Ok(())
    }

    /// Reads one tree; `Ok(None)` at a clean end of stream.
    pub fn read_binary<R: Read>(input: &mut R) -> Result<Option<Self>> {
        let n = match read_varint(input)? {
            Some(n) => n as usize,
            None => return Ok(None),
        };
        let mut degrees = Vec::with_capacity(n.min(1 << 24));
        for _ in 0..n {
            let k = read_varint(input)?
                .ok_or_else(|| Error::MalformedPath("truncated tree record".into()))?;
            degrees.push(
                u32::try_from(k).map_err(|_| Error::MalformedPath("degree overflows u32".into()))?,
            );
        }
        Self::from_degrees(degrees).map(Some)
    }
}

pub(crate) fn depths_of(degrees: &[u32]) -> Vec<u32> {
    let mut depths = Vec::with_capacity(degrees.len());
    let mut open: Vec<u32> = Vec::new();
    for &k in degrees {
        while open.last() == Some(&0) {
            open.pop();
        }
        depths.push(open.len() as u32);
        if let Some(left) = open.last_mut() {
            *left -= 1;
        }
        if k > 0 {
            open.push(k);
        }
    }
    depths
}

pub(crate) fn subtree_sizes_of(degrees: &[u32]) -> Vec<u64> {
    let mut sizes = vec![0u64; degrees.len()];
    let mut stack: Vec<u64> = Vec::new();
    for i in (0..degrees.len()).rev() {
        let mut s = 1u64;
        for _ in 0..degrees[i] {
            s += stack.pop().expect("valid degree sequence");
        }
        sizes[i] = s;
        stack.push(s);
    }
    sizes
}

fn write_varint<W: Write>(out: &mut W, mut v: u64) -> io::Result<()> {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            return out.write_all(&[byte]);
        }
        out.write_all(&[byte | 0x80])?;
    }
}

fn read_varint<R: Read>(input: &mut R) -> Result<Option<u64>> {
    let mut v = 0u64;
    let mut shift = 0u32;
    let mut buf = [0u8; 1];
    loop {
        match input.read(&mut buf)? {
            0 if shift == 0 => return Ok(None),
            0 => return Err(Error::MalformedPath("truncated varint".into())),
            _ => {}
        }
        if shift >= 64 {
            return Err(Error::MalformedPath("varint too long".into()));
        }
        v |= ((buf[0] & 0x7f) as u64) << shift;
        if buf[0] & 0x80 == 0 {
            return Ok(Some(v));
        }
        shift += 7;
    }
}

/// Ordered sequence of plane trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    pub trees: Vec<PlaneTree>,
}

impl Forest {
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn total_size(&self) -> usize {
        self.trees.iter().map(PlaneTree::len).sum()
    }

    /// `W_{n_i + k} = W_k(τ_{i+1}) − i` where `n_i` counts the vertices of the
    /// first `i` trees.
    pub fn lukasiewicz(&self) -> LukasiewiczPath {
        let mut values = vec![0i64];
        let mut w = 0i64;
        for t in &self.trees {
            for &k in t.degrees() {
                w += k as i64 - 1;
                values.push(w);
            }
        }
        LukasiewiczPath {
            values,
            kind: PathKind::Forest,
        }
    }

    /// Splits a path at its successive first hits of `−1, −2, ...`; the path
    /// must end at its first hit of its terminal value.
    pub fn from_lukasiewicz(path: &LukasiewiczPath) -> Result<Self> {
        let vals = path.values();
        let last = *vals.last().expect("nonempty path");
        if last >= 0 {
            return Err(Error::MalformedPath("forest path must end below 0".into()));
        }
        let mut trees = Vec::with_capacity((-last) as usize);
        let mut start = 0usize;
        let mut floor = 0i64;
        for i in 1..vals.len() {
            if vals[i] < floor - 1 {
                return Err(Error::MalformedPath(format!("path skips level at {i}")));
            }
            if vals[i] == floor - 1 {
                let degrees = (start..i)
                    .map(|j| (vals[j + 1] - vals[j] + 1) as u32)
                    .collect();
                trees.push(PlaneTree::from_degrees(degrees)?);
                floor -= 1;
                start = i;
            }
        }
        if start != vals.len() - 1 {
            return Err(Error::MalformedPath("path does not end at a first hit".into()));
        }
        Ok(Forest { trees })
    }

    /// Height of the forest (maximum over its trees).
    pub fn height(&self) -> u32 {
        self.trees.iter().map(PlaneTree::height).max().unwrap_or(0)
    }

    /// Concatenated height functions (without terminal padding).
    pub fn height_function(&self) -> Vec<u32> {
        self.trees.iter().flat_map(|t| t.depths()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModifiedPath {
    pub path: LukasiewiczPath,
    /// `I(τ)`: first index of the minimum of `W̃`.
    pub pivot: usize,
    /// `ζ̃_k`, `k = 1..Δ`.
    pub zeta_tilde: Vec<usize>,
}

/// Statistics of a finite tree attached to its first vertex of maximal
/// out-degree `u⋆`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeStats {
    pub size: usize,
    /// `Δ(τ)`.
    pub delta: u32,
    /// Second largest entry of the out-degree multiset.
    pub second_degree: u32,
    /// `U(τ)`.
    pub u_star_index: usize,
    /// `|u⋆(τ)|`.
    pub u_star_generation: u32,
    /// `𝓗(τ)`.
    pub height: u32,
    /// `ξ_1..ξ_Δ`.
    pub xi: Vec<u64>,
    /// `Z_1..Z_Δ`.
    pub z_partial: Vec<u64>,
    /// `I(τ)`.
    pub pivot_i: usize,
    /// `ζ̃_1..ζ̃_Δ`.
    pub zeta_tilde: Vec<usize>,
}

impl TreeStats {
    pub fn xi_max(&self) -> u64 {
        self.xi.iter().copied().max().unwrap_or(0)
    }

    /// `Z_j` with `Z_0 = 0`.
    pub fn z(&self, j: usize) -> u64 {
        if j == 0 {
            0
        } else {
            self.z_partial[j - 1]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cherry() -> PlaneTree {
        PlaneTree::star(2)
    }

    #[test]
    fn lukasiewicz_small_trees() {
        assert_eq!(PlaneTree::singleton().lukasiewicz().values(), &[0, -1]);
        assert_eq!(cherry().lukasiewicz().values(), &[0, 1, 0, -1]);
        let p = LukasiewiczPath::new(vec![0, 1, 0, -1], PathKind::Plain).unwrap();
        assert_eq!(PlaneTree::from_lukasiewicz(&p).unwrap(), cherry());
        let p = LukasiewiczPath::new(vec![0, -1], PathKind::Plain).unwrap();
        assert_eq!(PlaneTree::from_lukasiewicz(&p).unwrap(), PlaneTree::singleton());
    }

    #[test]
    fn malformed_paths_rejected() {
        for vals in [vec![0, -1, 0, -1], vec![0, 1, 0], vec![0, 0]] {
            let p = LukasiewiczPath::new(vals, PathKind::Plain).unwrap();
            assert!(matches!(PlaneTree::from_lukasiewicz(&p), Err(Error::MalformedPath(_))));
        }
        assert!(LukasiewiczPath::new(vec![1, 0], PathKind::Plain).is_err());
        assert!(LukasiewiczPath::new(vec![0, -2], PathKind::Plain).is_err());
        assert!(PlaneTree::from_degrees(vec![]).is_err());
    }

    #[test]
    fn height_and_contour() {
        assert_eq!(cherry().height_function(), vec![0, 1, 1, 0]);
        assert_eq!(PlaneTree::chain(3).height_function(), vec![0, 1, 2, 0]);
        assert_eq!(PlaneTree::singleton().contour(), vec![0, 0, 0]);
        assert_eq!(PlaneTree::chain(2).contour(), vec![0, 1, 0, 0, 0]);
        assert_eq!(cherry().contour(), vec![0, 1, 0, 1, 0, 0, 0]);
        // root(2) -> [leaf, child(1) -> leaf]
        let t = PlaneTree::from_degrees(vec![2, 0, 1, 0]).unwrap();
        assert_eq!(t.contour(), vec![0, 1, 0, 1, 2, 1, 0, 0, 0]);
        assert_eq!(heights_from_path(t.lukasiewicz().values()), t.depths());
    }

    #[test]
    fn labels_round_trip() {
        let t = PlaneTree::from_degrees(vec![3, 0, 2, 1, 0, 0, 0]).unwrap();
        assert_eq!(t.label(0), Vec::<u32>::new());
        assert_eq!(t.label(4), vec![2, 1, 1]);
        assert_eq!(t.label(6), vec![3]);
        for i in 0..t.len() {
            assert_eq!(t.index_of(&t.label(i)), Some(i));
        }
        assert_eq!(t.index_of(&[4]), None);
        assert_eq!(t.children(2), vec![3, 5]);
    }

    #[test]
    fn star_statistics() {
        let t = PlaneTree::star(5);
        let s = t.stats();
        assert_eq!(s.delta, 5);
        assert_eq!(s.u_star_index, 0);
        assert_eq!(s.u_star_generation, 0);
        assert_eq!(s.height, 1);
        assert_eq!(s.xi, vec![1; 5]);
        assert_eq!(s.z_partial, vec![1, 2, 3, 4, 5]);
        let m = t.modified_path();
        assert_eq!(m.path.values(), &[0, -1, -2, -3, -4, -5]);
        assert_eq!(m.pivot, 5);
        assert_eq!(s.pivot_i, t.len() - 1);
        let f = t.subtree_forest(1, 5).unwrap();
        assert!(f.trees.iter().all(|x| x.len() == 1));
        assert!(t.subtree_forest(0, 2).is_err());
        assert!(t.subtree_forest(2, 6).is_err());
    }

    #[test]
    fn pivot_for_a_26_vertex_tree() {
        // first maximal out-degree 4 at lexicographic index 9
        let mut degrees = vec![2, 1, 1, 0, 1, 1, 1, 1, 1, 4];
        degrees.extend([1, 1, 2, 0, 2, 0, 0, 1, 1, 3, 0, 0, 1, 0, 0, 0]);
        let t = PlaneTree::from_degrees(degrees).unwrap();
        assert_eq!(t.len(), 26);
        let s = t.stats();
        assert_eq!((s.delta, s.u_star_index), (4, 9));
        assert_eq!(s.pivot_i, 16);
        assert_eq!(s.u_star_index, 26 - 1 - s.pivot_i);
    }

    #[test]
    fn ties_break_to_first_vertex() {
        let t = PlaneTree::from_degrees(vec![2, 2, 0, 0, 0]).unwrap();
        let s = t.stats();
        assert_eq!(s.u_star_index, 0);
        assert_eq!(s.second_degree, 2);
        assert_eq!(s.xi, vec![3, 1]);
    }

    #[test]
    fn forest_round_trip() {
        let f = Forest {
            trees: vec![cherry(), PlaneTree::singleton(), PlaneTree::chain(3)],
        };
        let p = f.lukasiewicz();
        assert_eq!(p.values(), &[0, 1, 0, -1, -2, -2, -2, -3]);
        assert_eq!(Forest::from_lukasiewicz(&p).unwrap(), f);
    }

    #[test]
    fn serialization_round_trip() {
        let trees = [PlaneTree::singleton(), PlaneTree::star(300), PlaneTree::chain(7)];
        let mut buf = Vec::new();
        for t in &trees {
            t.write_binary(&mut buf).unwrap();
            assert_eq!(PlaneTree::from_csv_row(&t.to_csv_row()).unwrap(), *t);
        }
        let mut r = buf.as_slice();
        for t in &trees {
            assert_eq!(PlaneTree::read_binary(&mut r).unwrap().as_ref(), Some(t));
        }
        assert_eq!(PlaneTree::read_binary(&mut r).unwrap(), None);
        assert!(PlaneTree::from_csv_row("1,x").is_err());
        assert!(PlaneTree::read_binary(&mut [3u8, 2].as_slice()).is_err());
    }
}
