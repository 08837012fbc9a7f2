//! FCIDUMP reading and writing.
//!
//! The header is a Fortran namelist starting with `&FCI` and ending with
//! `&END` or `/`. `NORB`, `NELEC` and `MS2` are required; other keys such
//! as `ORBSYM` and `ISYM` are accepted and ignored. Each following line is
//! a record `value i j k l` with 1-based indices in chemist notation:
//!
//! | indices        | meaning                                      |
//! |----------------|----------------------------------------------|
//! | `i j k l`      | `h_ijkl` and its 8-fold symmetric images     |
//! | `i j 0 0`      | `h_ij` and `h_ji`                            |
//! | `i 0 0 0`      | orbital energy, ignored                      |
//! | `0 0 0 0`      | constant (core) energy                       |
//!
//! Fortran `D` exponents are accepted.

use std::fmt::Write as _;
use std::io::BufRead;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::operators::{MolecularHamiltonian, TwoBodyTensor};
use crate::sector::SectorShape;

/// A parsed FCIDUMP file.
#[derive(Debug, Clone, PartialEq)]
pub struct Fcidump {
    pub hamiltonian: MolecularHamiltonian,
    pub nelec: usize,
    pub ms2: i64,
}

impl Fcidump {
    pub fn norb(&self) -> usize {
        self.hamiltonian.norb()
    }

    /// The sector with `nelec` electrons and `2 S_z = ms2`.
    pub fn sector(&self) -> Result<SectorShape> {
        let n = self.nelec as i64;
        if (n + self.ms2) % 2 != 0 || self.ms2.abs() > n {
            return Err(Error::InvalidSector(format!(
                "NELEC={} and MS2={} do not give whole spin populations",
                self.nelec, self.ms2
            )));
        }
        SectorShape::new(self.norb(), ((n + self.ms2) / 2) as usize, ((n - self.ms2) / 2) as usize)
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_real(token: &str, line: usize) -> Result<f64> {
    token
        .replace(['D', 'd'], "e")
        .parse::<f64>()
        .map_err(|_| parse_error(line, format!("invalid number {token:?}")))
}

fn header_value(header: &[(String, String)], key: &str, line: usize) -> Result<i64> {
    let (_, v) = header
        .iter()
        .find(|(k, _)| k == key)
        .ok_or_else(|| parse_error(line, format!("header is missing {key}")))?;
    v.parse::<i64>()
        .map_err(|_| parse_error(line, format!("{key} must be an integer, got {v:?}")))
}

/// Reads an FCIDUMP file.
pub fn parse_fcidump<R: BufRead>(source: R) -> Result<Fcidump> {
    let mut lines = source.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut header_text = String::new();
    let mut header_end = 0;
    let mut started = false;
    for (lineno, line) in lines.by_ref() {
        let line = line?;
        let trimmed = line.trim();
        if !started {
            if trimmed.is_empty() {
                continue;
            }
            if !trimmed.to_ascii_uppercase().starts_with("&FCI") {
                return Err(parse_error(lineno, "expected namelist header starting with &FCI"));
            }
            started = true;
        }
        let upper = trimmed.to_ascii_uppercase();
        let (body, done) = if let Some(pos) = upper.find("&END") {
            (&trimmed[..pos], true)
        } else if let Some(stripped) = trimmed.strip_suffix('/') {
            (stripped, true)
        } else {
            (trimmed, false)
        };
        header_text.push_str(body);
        header_text.push(' ');
        if done {
            header_end = lineno;
            break;
        }
    }
    if header_end == 0 {
        return Err(parse_error(0, "unterminated or missing namelist header"));
    }
    let header_text = header_text.trim_start();
    let header_text = &header_text[4.min(header_text.len())..];
    let mut header = Vec::new();
    for token in header_text.split([',', ' ', '\t']).filter(|t| !t.is_empty()) {
        if let Some((k, v)) = token.split_once('=') {
            header.push((k.trim().to_ascii_uppercase(), v.trim().to_string()));
        }
    }
    let norb = header_value(&header, "NORB", header_end)?;
    let nelec = header_value(&header, "NELEC", header_end)?;
    let ms2 = header_value(&header, "MS2", header_end)?;
    if norb < 1 || nelec < 0 {
        return Err(parse_error(header_end, "NORB must be positive and NELEC non-negative"));
    }
    let norb = norb as usize;

    let mut one_body = CMatrix::zeros(norb, norb);
    let mut two_body = TwoBodyTensor::zeros(norb);
    let mut constant = 0.0;
    for (lineno, line) in lines {
        let line = line?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 5 {
            return Err(parse_error(lineno, format!("expected 5 fields, found {}", fields.len())));
        }
        let value = parse_real(fields[0], lineno)?;
        let mut idx = [0usize; 4];
        for (slot, tok) in idx.iter_mut().zip(&fields[1..]) {
            let i: usize = tok
                .parse()
                .map_err(|_| parse_error(lineno, format!("invalid index {tok:?}")))?;
            if i > norb {
                return Err(parse_error(lineno, format!("index {i} exceeds NORB={norb}")));
            }
            *slot = i;
        }
        let v = Complex64::new(value, 0.0);
        match idx {
            [0, 0, 0, 0] => constant = value,
            [i, 0, 0, 0] if i > 0 => {}
            [i, j, 0, 0] if i > 0 && j > 0 => {
                one_body[(i - 1, j - 1)] = v;
                one_body[(j - 1, i - 1)] = v;
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                two_body.set_symmetric(i - 1, j - 1, k - 1, l - 1, v);
            }
            _ => {
                return Err(parse_error(lineno, format!("unsupported index pattern {idx:?}")));
            }
        }
    }
    let hamiltonian = MolecularHamiltonian::new(one_body, two_body, constant)?;
    Ok(Fcidump {
        hamiltonian,
        nelec: nelec as usize,
        ms2,
    })
}

/// Writes one record per symmetry-unique nonzero integral. Values use the
/// shortest decimal form that parses back to the same `f64`.
pub fn write_fcidump(dump: &Fcidump) -> Result<String> {
    let ham = &dump.hamiltonian;
    let n = ham.norb();
    let real = |z: Complex64, what: &str| -> Result<f64> {
        if z.im != 0.0 {
            return Err(Error::Format(format!("{what} has an imaginary part")));
        }
        Ok(z.re)
    };
    let mut out = String::new();
    let orbsym = vec!["1"; n].join(",");
    writeln!(out, "&FCI NORB={n},NELEC={},MS2={},", dump.nelec, dump.ms2).unwrap();
    writeln!(out, " ORBSYM={orbsym},").unwrap();
    writeln!(out, " ISYM=1,").unwrap();
    writeln!(out, "&END").unwrap();
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if i * (i + 1) / 2 + j < k * (k + 1) / 2 + l {
                        continue;
                    }
                    let v = real(ham.two_body[(i, j, k, l)], "two-body tensor")?;
                    if v != 0.0 {
                        writeln!(out, "{v:e} {} {} {} {}", i + 1, j + 1, k + 1, l + 1).unwrap();
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let v = real(ham.one_body[(i, j)], "one-body matrix")?;
            if v != 0.0 {
                writeln!(out, "{v:e} {} {} 0 0", i + 1, j + 1).unwrap();
            }
        }
    }
    writeln!(out, "{:e} 0 0 0 0", ham.constant).unwrap();
    Ok(out)
}

/// Energy of the configuration filling the lowest orbitals of each spin.
pub fn hartree_fock_energy(ham: &MolecularHamiltonian, nalpha: usize, nbeta: usize) -> f64 {
    let mut e = ham.constant;
    let occ = [nalpha, nbeta];
    for &na in &occ {
        for i in 0..na {
            e += ham.one_body[(i, i)].re;
            for j in 0..na {
                e -= 0.5 * ham.two_body[(i, j, j, i)].re;
            }
        }
        for &nb in &occ {
            for i in 0..na {
                for j in 0..nb {
                    e += 0.5 * ham.two_body[(i, i, j, j)].re;
                }
            }
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    const H2: &str = "&FCI NORB=2,NELEC=2,MS2=0,\n ORBSYM=1,1,\n ISYM=1,\n&END\n\
        0.6746 1 1 1 1\n0.6636 2 2 1 1\n0.1813 2 1 2 1\n0.6975 2 2 2 2\n\
        -1.2525 1 1 0 0\n-0.4759 2 2 0 0\n0.7137 0 0 0 0\n";

    #[test]
    fn parses_minimal_constant_only() {
        let d = parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0 /\n1.5D0 0 0 0 0\n".as_bytes()).unwrap();
        assert_eq!(d.hamiltonian.constant, 1.5);
        assert!(d.hamiltonian.one_body.iter().all(|z| *z == Complex64::new(0.0, 0.0)));
        assert_eq!(d.sector().unwrap(), SectorShape::new(2, 1, 1).unwrap());
    }

    #[test]
    fn single_two_body_record() {
        let d = parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0\n&END\n2.0 1 1 1 1\n".as_bytes()).unwrap();
        let t = &d.hamiltonian.two_body;
        assert_eq!(t[(0, 0, 0, 0)].re, 2.0);
        assert_eq!(t.data().iter().filter(|z| z.re != 0.0).count(), 1);
    }

    #[test]
    fn symmetric_images_are_set() {
        let d = parse_fcidump(H2.as_bytes()).unwrap();
        let t = &d.hamiltonian.two_body;
        assert_eq!(t[(0, 1, 0, 1)].re, 0.1813);
        assert_eq!(t[(1, 0, 1, 0)].re, 0.1813);
        assert_eq!(t[(0, 0, 1, 1)].re, 0.6636);
        assert_eq!(d.hamiltonian.one_body[(1, 1)].re, -0.4759);
    }

    #[test]
    fn round_trip_is_exact() {
        let d = parse_fcidump(H2.as_bytes()).unwrap();
        let again = parse_fcidump(write_fcidump(&d).unwrap().as_bytes()).unwrap();
        assert_eq!(d, again);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad_index = "&FCI NORB=2,NELEC=2,MS2=0\n&END\n1.0 1 1 0 0\n1.0 3 1 0 0\n";
        assert!(matches!(parse_fcidump(bad_index.as_bytes()), Err(Error::Parse { line: 4, .. })));
        let bad_value = "&FCI NORB=2,NELEC=2,MS2=0\n&END\nabc 1 1 0 0\n";
        assert!(matches!(parse_fcidump(bad_value.as_bytes()), Err(Error::Parse { line: 3, .. })));
        let no_norb = "&FCI NELEC=2,MS2=0\n&END\n";
        assert!(matches!(parse_fcidump(no_norb.as_bytes()), Err(Error::Parse { line: 2, .. })));
        assert!(parse_fcidump("NORB=2\n".as_bytes()).is_err());
        assert!(parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0\n1.0 1 1 0 0\n".as_bytes()).is_err());
    }
}
