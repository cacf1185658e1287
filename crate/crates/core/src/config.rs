//! Site colorings: lazily hashed random fields and materialized configurations.
//!
//! A site's color depends only on `(seed, sample index, site)`, so a lazily
//! evaluated field and a materialized configuration with the same seed and
//! index agree site by site, and shards can be evaluated in any order.

use std::io::{BufRead, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Hex, Region, SiteSet};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-sample key derived from the run seed and the sample index.
#[inline]
pub fn sample_key(seed: u64, index: u64) -> u64 {
    mix(mix(seed ^ 0x5851_F42D_4C95_7F2D).wrapping_add(index.wrapping_mul(GOLDEN)))
}

#[inline]
fn site_bit(key: u64, h: Hex) -> bool {
    let pack = ((h.q as u32 as u64) << 32) | h.r as u32 as u64;
    mix(key.wrapping_add(pack.wrapping_mul(GOLDEN))) >> 63 == 1
}

/// Anything that assigns open/closed to sites.
pub trait Coloring {
    fn is_open(&self, h: Hex) -> bool;

    /// Color if the site is covered, `None` otherwise.
    fn try_open(&self, h: Hex) -> Option<bool> {
        Some(self.is_open(h))
    }
}

impl<C: Coloring + ?Sized> Coloring for &C {
    #[inline]
    fn is_open(&self, h: Hex) -> bool {
        (**self).is_open(h)
    }
    fn try_open(&self, h: Hex) -> Option<bool> {
        (**self).try_open(h)
    }
}

/// Critical Bernoulli field on the whole plane, evaluated on demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomField {
    key: u64,
    pub seed: u64,
    pub index: u64,
}

impl RandomField {
    pub fn new(seed: u64, index: u64) -> Self {
        RandomField {
            key: sample_key(seed, index),
            seed,
            index,
        }
    }
}

impl Coloring for RandomField {
    #[inline]
    fn is_open(&self, h: Hex) -> bool {
        site_bit(self.key, h)
    }
}

/// Forces a region to one color on top of another coloring.
#[derive(Clone, Copy, Debug)]
pub struct Wired<C, R> {
    pub base: C,
    pub region: R,
    pub open: bool,
}

impl<C: Coloring, R: Region> Coloring for Wired<C, R> {
    #[inline]
    fn is_open(&self, h: Hex) -> bool {
        if self.region.contains(h) {
            self.open
        } else {
            self.base.is_open(h)
        }
    }
    fn try_open(&self, h: Hex) -> Option<bool> {
        if self.region.contains(h) {
            Some(self.open)
        } else {
            self.base.try_open(h)
        }
    }
}

/// Color reversal of another coloring.
#[derive(Clone, Copy, Debug)]
pub struct Reversed<C>(pub C);

impl<C: Coloring> Coloring for Reversed<C> {
    #[inline]
    fn is_open(&self, h: Hex) -> bool {
        !self.0.is_open(h)
    }
    fn try_open(&self, h: Hex) -> Option<bool> {
        self.0.try_open(h).map(|b| !b)
    }
}

/// Coloring given by a closure; handy in tests and hand-built examples.
pub struct FnColoring<F>(pub F);

impl<F: Fn(Hex) -> bool> Coloring for FnColoring<F> {
    fn is_open(&self, h: Hex) -> bool {
        (self.0)(h)
    }
}

/// Colors of every site of a finite region.
#[derive(Clone, Debug)]
pub struct Configuration {
    region: Arc<SiteSet>,
    bits: Vec<u64>,
    pub seed: u64,
    pub index: u64,
}

impl Configuration {
    /// Critical sample: each site open with probability 1/2, independently.
    pub fn sample(region: Arc<SiteSet>, seed: u64, index: u64) -> Result<Self> {
        if region.is_empty() {
            return Err(Error::EmptyRegion);
        }
        let field = RandomField::new(seed, index);
        let mut c = Configuration::from_fn(region, |h| field.is_open(h));
        c.seed = seed;
        c.index = index;
        Ok(c)
    }

    pub fn from_fn(region: Arc<SiteSet>, f: impl Fn(Hex) -> bool) -> Self {
        let mut bits = vec![0u64; region.len().div_ceil(64)];
        for (i, h) in region.iter().enumerate() {
            if f(h) {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        Configuration {
            region,
            bits,
            seed: 0,
            index: 0,
        }
    }

    /// Site `i` (in region order) open iff bit `i` of `pattern` is set.
    pub fn from_pattern(region: Arc<SiteSet>, pattern: u64) -> Result<Self> {
        if region.len() > 64 {
            return Err(Error::RegionTooLarge {
                sites: region.len(),
                limit: 64,
            });
        }
        let mask = if region.len() == 64 {
            u64::MAX
        } else {
            (1u64 << region.len()) - 1
        };
        let bits = if region.is_empty() {
            Vec::new()
        } else {
            vec![pattern & mask]
        };
        Ok(Configuration {
            region,
            bits,
            seed: 0,
            index: pattern,
        })
    }

    pub fn region(&self) -> &SiteSet {
        &self.region
    }

    pub fn region_arc(&self) -> Arc<SiteSet> {
        self.region.clone()
    }

    #[inline]
    fn bit(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn state(&self, h: Hex) -> Result<bool> {
        self.region
            .index_of(h)
            .map(|i| self.bit(i))
            .ok_or(Error::OutsideRegion(h))
    }

    /// Copy with one site's color switched.
    pub fn flip(&self, h: Hex) -> Result<Configuration> {
        let i = self.region.index_of(h).ok_or(Error::OutsideRegion(h))?;
        let mut c = self.clone();
        c.bits[i / 64] ^= 1 << (i % 64);
        Ok(c)
    }

    pub fn set(&mut self, h: Hex, open: bool) -> Result<()> {
        let i = self.region.index_of(h).ok_or(Error::OutsideRegion(h))?;
        if open {
            self.bits[i / 64] |= 1 << (i % 64);
        } else {
            self.bits[i / 64] &= !(1 << (i % 64));
        }
        Ok(())
    }

    pub fn open_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn reversed(&self) -> Configuration {
        let mut c = self.clone();
        for w in &mut c.bits {
            *w = !*w;
        }
        let tail = self.region.len() % 64;
        if tail != 0 {
            if let Some(last) = c.bits.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        c
    }

    /// Writes a JSON header line followed by run-length encoded colors
    /// (`<count>o` / `<count>c`) in region order.
    pub fn dump(&self, mut w: impl Write) -> Result<()> {
        let header = DumpHeader {
            version: DUMP_VERSION,
            seed: self.seed,
            index: self.index,
            sites: self.region.iter().map(|h| [h.q, h.r]).collect(),
        };
        serde_json::to_writer(&mut w, &header)?;
        writeln!(w)?;
        let mut line = String::new();
        let n = self.region.len();
        let mut i = 0;
        while i < n {
            let b = self.bit(i);
            let mut j = i;
            while j < n && self.bit(j) == b {
                j += 1;
            }
            line.push_str(&format!("{}{}", j - i, if b { 'o' } else { 'c' }));
            i = j;
        }
        writeln!(w, "{line}")?;
        Ok(())
    }

    pub fn load(r: impl BufRead) -> Result<Configuration> {
        let mut lines = r.lines();
        let header: DumpHeader = serde_json::from_str(
            &lines
                .next()
                .ok_or_else(|| Error::Parse("missing header".into()))??,
        )?;
        if header.version != DUMP_VERSION {
            return Err(Error::Parse(format!(
                "unsupported dump version {}",
                header.version
            )));
        }
        let body = lines.next().transpose()?.unwrap_or_default();
        let region = Arc::new(SiteSet::from_sites(
            header.sites.iter().map(|s| Hex::new(s[0], s[1])),
        ));
        if region.len() != header.sites.len() {
            return Err(Error::Parse("duplicate or unsorted sites in header".into()));
        }
        let mut colors = Vec::with_capacity(region.len());
        let mut count = String::new();
        for ch in body.trim().chars() {
            match ch {
                '0'..='9' => count.push(ch),
                'o' | 'c' => {
                    let k: usize = count
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad run length {count:?}")))?;
                    colors.extend(std::iter::repeat_n(ch == 'o', k));
                    count.clear();
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "unexpected {ch:?} in run-length body"
                    )))
                }
            }
        }
        if colors.len() != region.len() || !count.is_empty() {
            return Err(Error::Parse(format!(
                "{} colors for {} sites",
                colors.len(),
                region.len()
            )));
        }
        let sorted: Vec<Hex> = header.sites.iter().map(|s| Hex::new(s[0], s[1])).collect();
        if sorted != region.sites() {
            return Err(Error::Parse(
                "header sites are not in canonical order".into(),
            ));
        }
        let mut c = Configuration::from_fn(region, |_| false);
        for (i, open) in colors.into_iter().enumerate() {
            if open {
                c.bits[i / 64] |= 1 << (i % 64);
            }
        }
        c.seed = header.seed;
        c.index = header.index;
        Ok(c)
    }
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.region == other.region && self.bits == other.bits
    }
}

impl Coloring for Configuration {
    /// Panics for sites outside the region; use [`Configuration::state`] for
    /// a checked lookup.
    #[inline]
    fn is_open(&self, h: Hex) -> bool {
        match self.region.index_of(h) {
            Some(i) => self.bit(i),
            None => panic!("site {h:?} outside configuration region"),
        }
    }

    fn try_open(&self, h: Hex) -> Option<bool> {
        self.region.index_of(h).map(|i| self.bit(i))
    }
}

const DUMP_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct DumpHeader {
    version: u32,
    seed: u64,
    index: u64,
    sites: Vec<[i32; 2]>,
}
