//! All boundary-to-boundary interfaces of a hole-free domain at once.
//!
//! An interior site has four alternating arms to the domain boundary exactly
//! when two distinct chords pass next to it: each chord touching the site
//! splits into two pieces running from the site to the boundary. The same
//! holds for a finite set of sites in place of a single one.

use crate::config::Coloring;
use crate::lattice::{Hex, Nowhere, Region, SiteSet, DIRECTIONS};

use super::{behind, follow, Holed, Stop};

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct ChordMap {
    domain: SiteSet,
    /// Boundary vertices `(s, s2, outside)` with `s, s2` in the domain.
    corners: Vec<(Hex, Hex, Hex)>,
    first: Vec<u32>,
    multi: Vec<bool>,
    touched: Vec<u32>,
    chords: u32,
}

impl ChordMap {
    pub fn new(domain: SiteSet) -> Self {
        let mut corners = Vec::new();
        for s in domain.boundary() {
            for k in 0..6 {
                let e = s + DIRECTIONS[k];
                let s2 = s + DIRECTIONS[(k + 1) % 6];
                if !domain.contains(e) && domain.contains(s2) {
                    corners.push((s, s2, e));
                }
            }
        }
        let n = domain.len();
        ChordMap {
            domain,
            corners,
            first: vec![NONE; n],
            multi: vec![false; n],
            touched: Vec::new(),
            chords: 0,
        }
    }

    pub fn domain(&self) -> &SiteSet {
        &self.domain
    }

    /// Traces every chord of `c` and marks the sites next to it.
    pub fn compute<C: Coloring + ?Sized>(&mut self, c: &C) {
        self.compute_with(c, |_, _, _| {});
    }

    /// As [`ChordMap::compute`], also reporting each edge as
    /// `(chord id, left, right)`.
    pub fn compute_with<C: Coloring + ?Sized>(
        &mut self,
        c: &C,
        mut edge: impl FnMut(u32, Hex, Hex),
    ) {
        for &i in &self.touched {
            self.first[i as usize] = NONE;
            self.multi[i as usize] = false;
        }
        self.touched.clear();
        self.chords = 0;
        let dom = Holed {
            outer: &self.domain,
            hole: Nowhere,
        };
        for k in 0..self.corners.len() {
            let (s, s2, e) = self.corners[k];
            let (os, os2) = (c.is_open(s), c.is_open(s2));
            if os == os2 {
                continue;
            }
            let (l, r) = if os { (s, s2) } else { (s2, s) };
            if behind(l, r) != e {
                continue;
            }
            let id = self.chords;
            self.chords += 1;
            let (domain, first, multi, touched) = (
                &self.domain,
                &mut self.first,
                &mut self.multi,
                &mut self.touched,
            );
            let mut mark = |h: Hex| {
                let i = domain.index_of(h).expect("chord sites lie in the domain");
                if first[i] == NONE {
                    first[i] = id;
                    touched.push(i as u32);
                } else if first[i] != id {
                    multi[i] = true;
                }
            };
            let stop = follow(c, &dom, (l, r), |a, b, _| {
                mark(a);
                mark(b);
                edge(id, a, b);
            });
            debug_assert!(matches!(stop, Stop::Outer(_)));
        }
    }

    pub fn chord_count(&self) -> usize {
        self.chords as usize
    }

    /// Number of distinct chords next to `h`, capped at two.
    pub fn touching(&self, h: Hex) -> usize {
        match self.domain.index_of(h) {
            Some(i) if self.multi[i] => 2,
            Some(i) if self.first[i] != NONE => 1,
            _ => 0,
        }
    }

    /// Four alternating arms from `h` to the domain boundary.
    pub fn is_important(&self, h: Hex) -> bool {
        self.touching(h) >= 2
    }

    /// Distinct chords next to any of the given sites, capped at two.
    pub fn touching_any(&self, sites: impl IntoIterator<Item = Hex>) -> usize {
        let mut seen = NONE;
        for h in sites {
            if let Some(i) = self.domain.index_of(h) {
                if self.multi[i] {
                    return 2;
                }
                let f = self.first[i];
                if f != NONE {
                    if seen == NONE {
                        seen = f;
                    } else if seen != f {
                        return 2;
                    }
                }
            }
        }
        (seen != NONE) as usize
    }

    /// Sites of a region touched by at least two chords.
    pub fn important_in<'a>(&'a self, region: &'a impl Region) -> impl Iterator<Item = Hex> + 'a {
        self.touched
            .iter()
            .map(|&i| self.domain.sites()[i as usize])
            .filter(move |h| {
                self.multi[self.domain.index_of(*h).expect("in domain")] && region.contains(*h)
            })
    }
}
