//! Symmetry-sector basis: occupation strings, combinadic addressing and
//! single-excitation tables.
//!
//! Strings of a fixed population are ordered by ascending bitmask value, so
//! the string occupying the lowest orbitals always sits at address 0. The
//! address of a string with occupied orbitals `o_0 < o_1 < ...` is
//! `sum_i binom(o_i, i + 1)`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest supported number of spatial orbitals.
pub const MAX_ORBITALS: usize = 64;

/// Spin label of a spin orbital.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spin {
    Alpha,
    Beta,
}

impl Spin {
    pub fn other(self) -> Spin {
        match self {
            Spin::Alpha => Spin::Beta,
            Spin::Beta => Spin::Alpha,
        }
    }
}

/// Orbital count and per-spin electron counts of a symmetry sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SectorShape {
    pub norb: usize,
    pub nalpha: usize,
    pub nbeta: usize,
}

impl SectorShape {
    pub fn new(norb: usize, nalpha: usize, nbeta: usize) -> Result<Self> {
        if norb > MAX_ORBITALS {
            return Err(Error::InvalidSector(format!(
                "{norb} orbitals exceeds the {MAX_ORBITALS}-orbital limit"
            )));
        }
        if nalpha > norb || nbeta > norb {
            return Err(Error::InvalidSector(format!(
                "electron counts ({nalpha}, {nbeta}) exceed {norb} orbitals"
            )));
        }
        Ok(Self { norb, nalpha, nbeta })
    }

    pub fn nocc(&self, spin: Spin) -> usize {
        match spin {
            Spin::Alpha => self.nalpha,
            Spin::Beta => self.nbeta,
        }
    }

    /// `max(nalpha, nbeta)`.
    pub fn eta(&self) -> usize {
        self.nalpha.max(self.nbeta)
    }

    pub fn dims(&self) -> (usize, usize) {
        (binom(self.norb, self.nalpha), binom(self.norb, self.nbeta))
    }

    /// Length of a state vector in this sector.
    pub fn dim(&self) -> usize {
        let (a, b) = self.dims();
        a * b
    }
}

/// Occupation bitmask of one spin species; bit `p` set means orbital `p` is
/// occupied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct OccupationString(pub u64);

impl OccupationString {
    pub fn from_orbitals(orbitals: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &p in orbitals {
            if p >= MAX_ORBITALS {
                return Err(Error::Contract(format!("orbital {p} out of range")));
            }
            if bits & (1 << p) != 0 {
                return Err(Error::Contract(format!("orbital {p} listed twice")));
            }
            bits |= 1 << p;
        }
        Ok(Self(bits))
    }

    /// The string occupying orbitals `0..nocc`.
    pub fn lowest(nocc: usize) -> Self {
        Self(low_mask(nocc))
    }

    pub fn count(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_occupied(&self, p: usize) -> bool {
        self.0 >> p & 1 == 1
    }

    pub fn orbitals(&self) -> Vec<usize> {
        BitIter(self.0).collect()
    }

    /// Bitstring with orbital 0 rightmost.
    pub fn to_bitstring(&self, norb: usize) -> String {
        (0..norb)
            .rev()
            .map(|p| if self.is_occupied(p) { '1' } else { '0' })
            .collect()
    }
}

/// Iterator over the set bit positions of a mask, ascending.
#[derive(Debug, Clone, Copy)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(p)
    }
}

pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Mask of the orbitals strictly between `p` and `q`.
pub(crate) fn between_mask(p: usize, q: usize) -> u64 {
    let (lo, hi) = if p < q { (p, q) } else { (q, p) };
    low_mask(hi) & !low_mask(lo + 1)
}

fn pascal() -> &'static [[u64; MAX_ORBITALS + 1]; MAX_ORBITALS + 1] {
    static TABLE: OnceLock<Box<[[u64; MAX_ORBITALS + 1]; MAX_ORBITALS + 1]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Box::new([[0u64; MAX_ORBITALS + 1]; MAX_ORBITALS + 1]);
        for n in 0..=MAX_ORBITALS {
            t[n][0] = 1;
            for k in 1..=n {
                // binom(64, 32) < 2^61, no overflow for n <= 64
                t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            }
        }
        t
    })
}

/// Binomial coefficient for `n <= 64`; zero when `k > n`.
pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    assert!(n <= MAX_ORBITALS, "binom({n}, {k}) outside the precomputed table");
    pascal()[n][k] as usize
}

/// Per-spin dimensions of a sector. The product is checked against the
/// platform word size.
pub fn sector_dimension(shape: &SectorShape) -> Result<(usize, usize)> {
    let (a, b) = shape.dims();
    a.checked_mul(b).ok_or_else(|| {
        Error::Overflow(format!(
            "sector ({}, {}, {}) has {a} x {b} amplitudes",
            shape.norb, shape.nalpha, shape.nbeta
        ))
    })?;
    Ok((a, b))
}

/// Combinadic address of an occupation string.
pub fn rank_string(occ: OccupationString, norb: usize, nocc: usize) -> Result<usize> {
    if norb > MAX_ORBITALS || occ.0 & !low_mask(norb) != 0 {
        return Err(Error::Contract(format!(
            "string {:#b} has orbitals outside 0..{norb}",
            occ.0
        )));
    }
    if occ.count() != nocc {
        return Err(Error::Contract(format!(
            "string {:#b} has {} electrons, expected {nocc}",
            occ.0,
            occ.count()
        )));
    }
    Ok(rank_unchecked(occ.0))
}

#[inline]
pub(crate) fn rank_unchecked(bits: u64) -> usize {
    let table = pascal();
    BitIter(bits)
        .enumerate()
        .map(|(i, p)| table[p][i + 1] as usize)
        .sum()
}

/// Inverse of [`rank_string`].
pub fn unrank_string(addr: usize, norb: usize, nocc: usize) -> Result<OccupationString> {
    if norb > MAX_ORBITALS || nocc > norb {
        return Err(Error::Contract(format!("invalid string space ({norb}, {nocc})")));
    }
    let dim = binom(norb, nocc);
    if addr >= dim {
        return Err(Error::Contract(format!(
            "address {addr} out of range 0..{dim}"
        )));
    }
    let mut rest = addr;
    let mut bits = 0u64;
    let mut hi = norb;
    for k in (1..=nocc).rev() {
        // largest o < hi with binom(o, k) <= rest
        let mut o = hi - 1;
        while binom(o, k) > rest {
            o -= 1;
        }
        bits |= 1 << o;
        rest -= binom(o, k);
        hi = o;
    }
    Ok(OccupationString(bits))
}

/// All strings with `nocc` of `norb` orbitals occupied, in address order.
pub fn strings(norb: usize, nocc: usize) -> Vec<u64> {
    assert!(norb <= MAX_ORBITALS && nocc <= norb);
    let dim = binom(norb, nocc);
    let mut out = Vec::with_capacity(dim);
    if nocc == 0 {
        out.push(0);
        return out;
    }
    let mut v = low_mask(nocc);
    for i in 0..dim {
        out.push(v);
        if i + 1 < dim {
            // Gosper's hack: next integer with the same popcount
            let c = v & v.wrapping_neg();
            let r = v + c;
            v = (((r ^ v) >> 2) / c) | r;
        }
    }
    out
}

/// One entry of an excitation table: `a+_q a_p |source> = sign |target>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Excitation {
    pub p: usize,
    pub q: usize,
    pub target: usize,
    pub sign: i8,
}

/// Single-excitation lookup ("link index") for every string of one spin.
#[derive(Debug, Clone)]
pub struct ExcitationTable {
    norb: usize,
    nocc: usize,
    stride: usize,
    entries: Vec<Excitation>,
}

impl ExcitationTable {
    pub fn norb(&self) -> usize {
        self.norb
    }

    pub fn nocc(&self) -> usize {
        self.nocc
    }

    pub fn len(&self) -> usize {
        binom(self.norb, self.nocc)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Entries for the string at `addr`, sorted by `(p, q)`.
    pub fn entries(&self, addr: usize) -> &[Excitation] {
        &self.entries[addr * self.stride..(addr + 1) * self.stride]
    }

    pub fn entries_per_string(&self) -> usize {
        self.stride
    }
}

/// Builds the excitation table for strings of `nocc` electrons in `norb`
/// orbitals. The sign of `a+_q a_p` is the parity of the occupied orbitals
/// strictly between `p` and `q`.
pub fn build_excitation_table(norb: usize, nocc: usize) -> Result<ExcitationTable> {
    if norb > MAX_ORBITALS || nocc > norb {
        return Err(Error::InvalidSector(format!(
            "invalid string space ({norb}, {nocc})"
        )));
    }
    let stride = nocc * (norb - nocc) + nocc;
    let strs = strings(norb, nocc);
    let mut entries = Vec::with_capacity(strs.len() * stride);
    for &s in &strs {
        for p in BitIter(s) {
            let removed = s & !(1 << p);
            for q in 0..norb {
                if q != p && s >> q & 1 == 1 {
                    continue;
                }
                let t = removed | 1 << q;
                let parity = (removed & between_mask(p, q)).count_ones() & 1;
                entries.push(Excitation {
                    p,
                    q,
                    target: rank_unchecked(t),
                    sign: if parity == 1 { -1 } else { 1 },
                });
            }
        }
    }
    debug_assert_eq!(entries.len(), strs.len() * stride);
    Ok(ExcitationTable {
        norb,
        nocc,
        stride,
        entries,
    })
}
