//! Clusters and crossings on finite configurations.

use crate::config::Coloring;
use crate::error::{Error, Result};
use crate::lattice::{Arc, Hex, Quad, Region, SiteSet};

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = self.parent[x] as usize;
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a as u32;
        self.size[a] += self.size[b];
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn size_of(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r] as usize
    }
}

/// Cluster labels of one color on a finite region.
#[derive(Clone, Debug)]
pub struct ClusterIndex {
    region: SiteSet,
    label: Vec<u32>,
    sizes: Vec<usize>,
    extents: Vec<[f64; 4]>,
}

const NONE: u32 = u32::MAX;

impl ClusterIndex {
    /// Clusters of the sites of `region` having color `open`.
    pub fn build<C: Coloring + ?Sized>(c: &C, region: &SiteSet, open: bool) -> Result<Self> {
        let n = region.len();
        let mut colors = Vec::with_capacity(n);
        for h in region.iter() {
            colors.push(c.try_open(h).ok_or(Error::OutsideRegion(h))? == open);
        }
        let mut uf = UnionFind::new(n);
        for (i, h) in region.iter().enumerate() {
            if !colors[i] {
                continue;
            }
            // half the directions suffice
            for d in &crate::lattice::DIRECTIONS[..3] {
                if let Some(j) = region.index_of(h + *d) {
                    if colors[j] {
                        uf.union(i, j);
                    }
                }
            }
        }
        let mut label = vec![NONE; n];
        let mut root_label = vec![NONE; n];
        let mut sizes = Vec::new();
        let mut extents: Vec<[f64; 4]> = Vec::new();
        for i in 0..n {
            if !colors[i] {
                continue;
            }
            let r = uf.find(i);
            if root_label[r] == NONE {
                root_label[r] = sizes.len() as u32;
                sizes.push(0);
                extents.push([
                    f64::INFINITY,
                    f64::INFINITY,
                    f64::NEG_INFINITY,
                    f64::NEG_INFINITY,
                ]);
            }
            label[i] = root_label[r];
            let k = label[i] as usize;
            sizes[k] += 1;
            let p = region.sites()[i].point();
            let e = &mut extents[k];
            *e = [e[0].min(p.x), e[1].min(p.y), e[2].max(p.x), e[3].max(p.y)];
        }
        Ok(ClusterIndex {
            region: region.clone(),
            label,
            sizes,
            extents,
        })
    }

    pub fn cluster_of(&self, h: Hex) -> Option<usize> {
        self.region.index_of(h).and_then(|i| match self.label[i] {
            NONE => None,
            l => Some(l as usize),
        })
    }

    pub fn same_cluster(&self, x: Hex, y: Hex) -> bool {
        matches!((self.cluster_of(x), self.cluster_of(y)), (Some(a), Some(b)) if a == b)
    }

    pub fn cluster_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Bounding box `[xmin, ymin, xmax, ymax]` of a cluster, lattice units.
    pub fn extent(&self, cluster: usize) -> [f64; 4] {
        self.extents[cluster]
    }

    /// Diagonal of the bounding box, a proxy for the cluster diameter.
    pub fn diameter(&self, cluster: usize) -> f64 {
        let e = self.extents[cluster];
        (e[2] - e[0]).hypot(e[3] - e[1])
    }

    /// Sites of one cluster.
    pub fn members(&self, cluster: usize) -> Vec<Hex> {
        self.region
            .iter()
            .zip(&self.label)
            .filter(|(_, &l)| l as usize == cluster)
            .map(|(h, _)| h)
            .collect()
    }
}

/// Is there a crossing of the given color in `q`: `ab` to `cd` when open,
/// `bc` to `da` when closed.
pub fn has_crossing<C: Coloring + ?Sized>(c: &C, q: &Quad, open: bool) -> Result<bool> {
    let (from, to) = if open {
        (Arc::AB, Arc::CD)
    } else {
        (Arc::BC, Arc::DA)
    };
    let sites = q.sites();
    let n = sites.len();
    let mut uf = UnionFind::new(n + 2);
    let mut colors = Vec::with_capacity(n);
    for h in sites.iter() {
        colors.push(c.try_open(h).ok_or(Error::OutsideRegion(h))? == open);
    }
    for (i, h) in sites.iter().enumerate() {
        if !colors[i] {
            continue;
        }
        for n_h in h.neighbors() {
            match sites.index_of(n_h) {
                Some(j) if colors[j] => {
                    uf.union(i, j);
                }
                Some(_) => {}
                None => match q.arc_of(n_h) {
                    Some(a) if a == from => {
                        uf.union(i, n);
                    }
                    Some(a) if a == to => {
                        uf.union(i, n + 1);
                    }
                    _ => {}
                },
            }
        }
    }
    Ok(uf.same(n, n + 1))
}

/// Open connection between two sites inside `region`.
pub fn connected<C: Coloring + ?Sized>(c: &C, region: &SiteSet, x: Hex, y: Hex) -> Result<bool> {
    for h in [x, y] {
        if !region.contains(h) {
            return Err(Error::OutsideRegion(h));
        }
    }
    Ok(ClusterIndex::build(c, region, true)?.same_cluster(x, y))
}

/// Breadth-first open connection in an unbounded coloring, grown alternately
/// from both ends and cut off outside `window`.
pub fn connected_within<C: Coloring + ?Sized>(c: &C, window: &impl Region, x: Hex, y: Hex) -> bool {
    use std::collections::{HashSet, VecDeque};
    if !(c.is_open(x) && c.is_open(y)) {
        return false;
    }
    if x == y {
        return true;
    }
    let mut seen: [HashSet<Hex>; 2] = [HashSet::from([x]), HashSet::from([y])];
    let mut queue: [VecDeque<Hex>; 2] = [VecDeque::from([x]), VecDeque::from([y])];
    loop {
        // grow the smaller frontier
        let side = if queue[0].len() <= queue[1].len() {
            0
        } else {
            1
        };
        let Some(h) = queue[side].pop_front() else {
            return false;
        };
        for n in h.neighbors() {
            if !window.contains(n) || seen[side].contains(&n) || !c.is_open(n) {
                continue;
            }
            if seen[1 - side].contains(&n) {
                return true;
            }
            seen[side].insert(n);
            queue[side].push_back(n);
        }
    }
}
