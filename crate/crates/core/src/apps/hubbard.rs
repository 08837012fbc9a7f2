//! Fermi-Hubbard model on a rectangular lattice.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, RMatrix};
use crate::operators::DiagonalCoulombHamiltonian;
use crate::sector::SectorShape;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubbardSpec {
    pub nx: usize,
    pub ny: usize,
    pub t_hop: f64,
    pub u_int: f64,
    pub periodic_x: bool,
}

impl HubbardSpec {
    pub fn norb(&self) -> usize {
        self.nx * self.ny
    }

    /// Nearest-neighbor site pairs `(p, q)` with `p < q`, site `p = x + nx y`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for y in 0..self.ny {
            for x in 0..self.nx {
                let p = x + self.nx * y;
                if x + 1 < self.nx {
                    edges.push((p, p + 1));
                }
                if y + 1 < self.ny {
                    edges.push((p, p + self.nx));
                }
            }
            if self.periodic_x && self.nx > 2 {
                edges.push((self.nx * y, self.nx * y + self.nx - 1));
            }
        }
        edges.sort_unstable();
        edges
    }
}

/// `-t sum_<pq> sum_s (a+_{ps} a_{qs} + h.c.) + U sum_p n_{p alpha} n_{p beta}`.
pub fn build_hubbard(spec: &HubbardSpec) -> Result<DiagonalCoulombHamiltonian> {
    if spec.nx == 0 || spec.ny == 0 {
        return Err(Error::Contract("lattice dimensions must be at least 1".into()));
    }
    let n = spec.norb();
    let mut one_body = CMatrix::zeros(n, n);
    for (p, q) in spec.edges() {
        one_body[(p, q)] = Complex64::new(-spec.t_hop, 0.0);
        one_body[(q, p)] = Complex64::new(-spec.t_hop, 0.0);
    }
    let j_ab = RMatrix::from_diagonal_element(n, n, spec.u_int);
    DiagonalCoulombHamiltonian::new(one_body, RMatrix::zeros(n, n), j_ab, RMatrix::zeros(n, n), 0.0)
}

/// Parses a filling given as a fraction `a/b` or a decimal.
pub fn parse_filling(text: &str) -> Result<f64> {
    let value = match text.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| Error::Contract(format!("bad filling {text:?}")))?;
            let b: f64 = b.trim().parse().map_err(|_| Error::Contract(format!("bad filling {text:?}")))?;
            a / b
        }
        None => text
            .trim()
            .parse()
            .map_err(|_| Error::Contract(format!("bad filling {text:?}")))?,
    };
    if !(value > 0.0 && value <= 1.0) {
        return Err(Error::Contract(format!("filling {text:?} must lie in (0, 1]")));
    }
    Ok(value)
}

/// Sector with `filling * norb` electrons of each spin.
pub fn filling_sector(norb: usize, filling: f64) -> Result<SectorShape> {
    let per_spin = filling * norb as f64;
    let rounded = per_spin.round();
    if (per_spin - rounded).abs() > 1e-9 {
        return Err(Error::InvalidSector(format!(
            "filling {filling} of {norb} orbitals is not a whole number of electrons per spin"
        )));
    }
    SectorShape::new(norb, rounded as usize, rounded as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(nx: usize, ny: usize, periodic_x: bool) -> HubbardSpec {
        HubbardSpec {
            nx,
            ny,
            t_hop: 1.0,
            u_int: 8.0,
            periodic_x,
        }
    }

    #[test]
    fn single_site() {
        let h = build_hubbard(&spec(1, 1, true)).unwrap();
        assert_eq!(h.one_body[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(h.j_ab[(0, 0)], 8.0);
    }

    #[test]
    fn edge_counts() {
        assert_eq!(spec(2, 2, true).edges(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(spec(4, 1, false).edges().len(), 3);
        assert_eq!(spec(4, 1, true).edges().len(), 4);
        assert_eq!(spec(4, 2, true).edges().len(), 8 + 4);
    }

    #[test]
    fn fillings() {
        assert_eq!(filling_sector(32, parse_filling("1/8").unwrap()).unwrap(), SectorShape::new(32, 4, 4).unwrap());
        assert_eq!(filling_sector(8, parse_filling("0.125").unwrap()).unwrap(), SectorShape::new(8, 1, 1).unwrap());
        assert!(filling_sector(6, 0.125).is_err());
        assert!(parse_filling("0").is_err());
        assert!(parse_filling("x/2").is_err());
    }
}
