//! Binary inner codes used with the BPSK alphabet, plus the fast
//! Walsh-Hadamard transform that both decodes them and models the Green
//! Machine.
//!
//! Bit convention, fixed across the crate: bit `0` is sent as amplitude `+a`,
//! bit `1` as `-a`. When a code carries an ancilla (pilot) symbol it sits at
//! coordinate 0.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeFamily {
    /// `(2^m - 1, 2^m, 2^{m-1})` Hadamard code, or `(2^m, 2^m, 2^{m-1})` with
    /// the constant pilot coordinate kept.
    Hadamard { m: u32, ancilla: bool },
    /// First-order Reed-Muller code `(2^m, 2^{m+1}, 2^{m-1})`.
    ReedMuller1 { m: u32 },
    /// The nonlinear `(2, 3, 1)` code `{00, 01, 10}`.
    TwoSymbol,
    /// Anything read from a codebook dump.
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    n: usize,
    d: usize,
    codewords: Vec<Vec<u8>>,
    family: CodeFamily,
}

/// Sylvester-ordered `2^m x 2^m` Hadamard matrix with `+-1` entries:
/// `H[i][j] = (-1)^{popcount(i & j)}`.
pub fn sylvester_hadamard(m: u32) -> Vec<Vec<i8>> {
    let size = 1usize << m;
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| if (i & j).count_ones() % 2 == 0 { 1 } else { -1 })
                .collect()
        })
        .collect()
}

fn check_order(m: u32) -> Result<()> {
    if m == 0 || m > 24 {
        return Err(Error::domain(format!("code order m must be in 1..=24, got {m}")));
    }
    Ok(())
}

fn hadamard_row(k: usize, len: usize) -> Vec<u8> {
    (0..len).map(|j| ((k & j).count_ones() % 2) as u8).collect()
}

/// BPSK Hadamard code of order `m`. Without the ancilla the constant first
/// Sylvester column is dropped.
pub fn hadamard_code(m: u32, with_ancilla: bool) -> Result<BinaryCode> {
    check_order(m)?;
    let len = 1usize << m;
    let codewords = (0..len)
        .map(|k| {
            let row = hadamard_row(k, len);
            if with_ancilla {
                row
            } else {
                row[1..].to_vec()
            }
        })
        .collect();
    Ok(BinaryCode {
        n: if with_ancilla { len } else { len - 1 },
        d: len / 2,
        codewords,
        family: CodeFamily::Hadamard {
            m,
            ancilla: with_ancilla,
        },
    })
}

/// RM(1,m): the ancilla-form Hadamard rows followed by their complements.
/// Message bits `(u0, u1..um)` map to index `u0 * 2^m + u1..um`.
pub fn rm1_code(m: u32) -> Result<BinaryCode> {
    check_order(m)?;
    let len = 1usize << m;
    let mut codewords: Vec<Vec<u8>> = (0..len).map(|k| hadamard_row(k, len)).collect();
    let complements: Vec<Vec<u8>> = codewords
        .iter()
        .map(|row| row.iter().map(|b| b ^ 1).collect())
        .collect();
    codewords.extend(complements);
    Ok(BinaryCode {
        n: len,
        d: len / 2,
        codewords,
        family: CodeFamily::ReedMuller1 { m },
    })
}

/// `{00, 01, 10}` in the order `|a a>, |a,-a>, |-a,a>`.
pub fn two_symbol_code() -> BinaryCode {
    BinaryCode {
        n: 2,
        d: 1,
        codewords: vec![vec![0, 0], vec![0, 1], vec![1, 0]],
        family: CodeFamily::TwoSymbol,
    }
}

pub fn hamming_distance(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

impl BinaryCode {
    /// Builds a code from explicit rows, computing the minimum distance.
    pub fn from_codewords(codewords: Vec<Vec<u8>>) -> Result<Self> {
        let n = codewords.first().map_or(0, Vec::len);
        if codewords.is_empty() || n == 0 {
            return Err(Error::domain("a code needs at least one nonempty codeword"));
        }
        if codewords.iter().any(|c| c.len() != n || c.iter().any(|&b| b > 1)) {
            return Err(Error::domain("codewords must be equal-length 0/1 rows"));
        }
        let mut d = usize::MAX;
        for i in 0..codewords.len() {
            for j in i + 1..codewords.len() {
                let h = hamming_distance(&codewords[i], &codewords[j]);
                if h == 0 {
                    return Err(Error::domain(format!("codewords {i} and {j} coincide")));
                }
                d = d.min(h);
            }
        }
        Ok(BinaryCode {
            n,
            d: if d == usize::MAX { n } else { d },
            codewords,
            family: CodeFamily::Custom,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of codewords `K`.
    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    pub fn min_distance(&self) -> usize {
        self.d
    }

    pub fn family(&self) -> CodeFamily {
        self.family
    }

    pub fn codewords(&self) -> &[Vec<u8>] {
        &self.codewords
    }

    pub fn codeword(&self, index: usize) -> &[u8] {
        &self.codewords[index]
    }

    pub fn distance(&self, i: usize, j: usize) -> usize {
        hamming_distance(&self.codewords[i], &self.codewords[j])
    }

    /// Number of message bits carried, when `K` is a power of two.
    pub fn message_bits(&self) -> Option<u32> {
        let k = self.size();
        k.is_power_of_two().then(|| k.trailing_zeros())
    }

    /// Message bits (most significant first) to codeword index.
    pub fn encode(&self, message: &[u8]) -> Result<usize> {
        let width = self
            .message_bits()
            .ok_or_else(|| Error::domain("code size is not a power of two; no bit labeling"))?;
        if message.len() != width as usize || message.iter().any(|&b| b > 1) {
            return Err(Error::domain(format!(
                "expected {width} message bits, got {:?}",
                message
            )));
        }
        Ok(message.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b)))
    }

    /// Inverse of [`BinaryCode::encode`].
    pub fn message_of(&self, index: usize) -> Option<Vec<u8>> {
        let width = self.message_bits()?;
        Some(
            (0..width)
                .rev()
                .map(|shift| ((index >> shift) & 1) as u8)
                .collect(),
        )
    }

    /// Writes the plain-text dump: header `n K d`, then one 0/1 row per line.
    pub fn to_codebook_string(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n, self.size(), self.d);
        for row in &self.codewords {
            for &b in row {
                out.push(if b == 0 { '0' } else { '1' });
            }
            out.push('\n');
        }
        out
    }

    pub fn from_codebook_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty codebook".into()))?;
        let fields: Vec<usize> = header
            .split_whitespace()
            .map(|f| f.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("bad header {header:?}: {e}")))?;
        let [n, k, d] = fields[..] else {
            return Err(Error::Parse(format!("header must be `n K d`, got {header:?}")));
        };
        let rows = lines
            .map(|l| {
                l.trim()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(0u8),
                        '1' => Ok(1u8),
                        other => Err(Error::Parse(format!("unexpected character {other:?}"))),
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != k {
            return Err(Error::Parse(format!("header says {k} codewords, found {}", rows.len())));
        }
        let code = BinaryCode::from_codewords(rows)?;
        if code.n != n || code.d != d {
            let mut msg = String::new();
            let _ = write!(msg, "header ({n}, {k}, {d}) disagrees with rows ({}, {k}, {})", code.n, code.d);
            return Err(Error::Parse(msg));
        }
        Ok(code)
    }
}

/// In-place butterfly Walsh-Hadamard transform in Sylvester order. The
/// normalized form scales each stage by `1/sqrt(2)` and is an involution.
pub fn fwht_in_place(v: &mut [f64], normalized: bool) -> Result<()> {
    let len = v.len();
    if !len.is_power_of_two() {
        return Err(Error::domain(format!("FWHT length must be a power of two, got {len}")));
    }
    let scale = if normalized { std::f64::consts::FRAC_1_SQRT_2 } else { 1.0 };
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for i in block..block + half {
                let (a, b) = (v[i], v[i + half]);
                v[i] = (a + b) * scale;
                v[i + half] = (a - b) * scale;
            }
        }
        half *= 2;
    }
    Ok(())
}

pub fn fwht(v: &[f64], normalized: bool) -> Result<Vec<f64>> {
    let mut out = v.to_vec();
    fwht_in_place(&mut out, normalized)?;
    Ok(out)
}

/// Maximum-likelihood decoding under a binary symmetric channel, i.e. the
/// codeword with the most agreeing positions. Ties go to the smallest index.
///
/// Hadamard and RM(1,m) codes are decoded by one FWHT of the received `+-1`
/// vector; other codes fall back to a linear scan.
pub fn ml_decode_hard(code: &BinaryCode, received: &[u8]) -> Result<usize> {
    if received.len() != code.n() {
        return Err(Error::domain(format!(
            "received word has length {}, code length is {}",
            received.len(),
            code.n()
        )));
    }
    let sign = |b: u8| if b == 0 { 1.0 } else { -1.0 };
    match code.family() {
        CodeFamily::Hadamard { m, ancilla } => {
            let corr = correlate(m, ancilla, received, sign)?;
            Ok(first_argmax(corr.iter().copied()))
        }
        CodeFamily::ReedMuller1 { m } => {
            let corr = correlate(m, true, received, sign)?;
            let scores = corr.iter().copied().chain(corr.iter().map(|c| -c));
            Ok(first_argmax(scores))
        }
        CodeFamily::TwoSymbol | CodeFamily::Custom => Ok(first_argmax(
            code.codewords()
                .iter()
                .map(|c| (code.n() - hamming_distance(c, received)) as f64),
        )),
    }
}

fn correlate(m: u32, ancilla: bool, received: &[u8], sign: impl Fn(u8) -> f64) -> Result<Vec<f64>> {
    let mut s = Vec::with_capacity(1 << m);
    if !ancilla {
        // the punctured pilot adds the same +1 to every correlation
        s.push(1.0);
    }
    s.extend(received.iter().map(|&b| sign(b)));
    fwht_in_place(&mut s, false)?;
    Ok(s)
}

fn first_argmax(scores: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, s) in scores.enumerate() {
        if s > best.1 {
            best = (i, s);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exhaustive_distances(code: &BinaryCode) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 0..code.size() {
            for j in i + 1..code.size() {
                out.push(code.distance(i, j));
            }
        }
        out
    }

    #[test]
    fn sylvester_small_cases() {
        assert_eq!(sylvester_hadamard(0), vec![vec![1]]);
        assert_eq!(sylvester_hadamard(1), vec![vec![1, 1], vec![1, -1]]);
        let h = sylvester_hadamard(3);
        for i in 0..8 {
            for j in 0..8 {
                let dot: i32 = (0..8).map(|k| i32::from(h[i][k]) * i32::from(h[j][k])).sum();
                assert_eq!(dot, if i == j { 8 } else { 0 });
            }
        }
    }

    #[test]
    fn hadamard_is_equidistant() {
        for m in 1..=6 {
            for ancilla in [false, true] {
                let code = hadamard_code(m, ancilla).unwrap();
                assert_eq!(code.size(), 1 << m);
                assert_eq!(code.n(), (1 << m) - usize::from(!ancilla));
                let d = 1usize << (m - 1);
                assert!(exhaustive_distances(&code).iter().all(|&h| h == d), "m={m}");
            }
        }
        let c = hadamard_code(2, false).unwrap();
        assert_eq!((c.n(), c.size(), c.min_distance()), (3, 4, 2));
        let c = hadamard_code(3, true).unwrap();
        assert_eq!((c.n(), c.size(), c.min_distance()), (8, 8, 4));
        assert!(c.codewords().iter().all(|row| row[0] == 0));
    }

    #[test]
    fn rm1_structure() {
        let c = rm1_code(1).unwrap();
        assert_eq!(c.codewords(), &[vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 0]]);
        let c = rm1_code(3).unwrap();
        assert_eq!(c.size(), 16);
        assert_eq!(*exhaustive_distances(&c).iter().min().unwrap(), 4);

        for m in 1..=5 {
            let c = rm1_code(m).unwrap();
            let h = hadamard_code(m, true).unwrap();
            let half = 1 << m;
            assert_eq!(&c.codewords()[..half], h.codewords());
            for k in 0..half {
                let comp: Vec<u8> = h.codeword(k).iter().map(|b| b ^ 1).collect();
                assert_eq!(c.codeword(half + k), comp.as_slice());
            }
            for a in c.codewords() {
                for b in c.codewords() {
                    let x: Vec<u8> = a.iter().zip(b).map(|(p, q)| p ^ q).collect();
                    assert!(c.codewords().contains(&x), "not closed under XOR, m={m}");
                }
            }
        }
    }

    #[test]
    fn two_symbol_parameters() {
        let c = two_symbol_code();
        assert_eq!((c.n(), c.size(), c.min_distance()), (2, 3, 1));
        assert_eq!(c.distance(0, 1), 1);
        assert!(!c.codewords().contains(&vec![1, 1]));
        assert!(c.message_bits().is_none());
        assert!(c.encode(&[0, 1]).is_err());
    }

    #[test]
    fn encode_round_trip() {
        let c = rm1_code(3).unwrap();
        assert_eq!(c.message_bits(), Some(4));
        assert_eq!(c.encode(&[1, 0, 1, 1]).unwrap(), 8 + 3);
        for k in 0..c.size() {
            assert_eq!(c.encode(&c.message_of(k).unwrap()).unwrap(), k);
        }
        assert!(c.encode(&[1, 0]).is_err());
    }

    #[test]
    fn fwht_examples() {
        let t = fwht(&[1.0; 4], true).unwrap();
        assert!(t.iter().zip([2.0, 0.0, 0.0, 0.0]).all(|(a, b)| (a - b).abs() < 1e-15));
        assert!(fwht(&[1.0; 3], false).is_err());
        assert!(fwht(&[], false).is_err());
        assert_eq!(fwht(&[5.0], true).unwrap(), vec![5.0]);
    }

    #[test]
    fn decode_noiseless_and_within_radius() {
        for code in [hadamard_code(4, false).unwrap(), rm1_code(4).unwrap(), two_symbol_code()] {
            for k in 0..code.size() {
                assert_eq!(ml_decode_hard(&code, code.codeword(k)).unwrap(), k);
            }
        }
        let code = rm1_code(4).unwrap();
        let radius = (code.min_distance() - 1) / 2;
        for k in 0..code.size() {
            let mut r = code.codeword(k).to_vec();
            for bit in r.iter_mut().take(radius) {
                *bit ^= 1;
            }
            assert_eq!(ml_decode_hard(&code, &r).unwrap(), k);
        }
        assert!(ml_decode_hard(&code, &[0, 1]).is_err());
    }

    #[test]
    fn codebook_dump_round_trip() {
        let c = hadamard_code(3, false).unwrap();
        let text = c.to_codebook_string();
        assert!(text.starts_with("7 8 4\n"));
        let back = BinaryCode::from_codebook_str(&text).unwrap();
        assert_eq!(back.codewords(), c.codewords());
        assert_eq!(back.min_distance(), 4);
        assert!(BinaryCode::from_codebook_str("2 2 2\n00\n01\n").is_err());
        assert!(BinaryCode::from_codebook_str("2 3 1\n00\n01\n").is_err());
        assert!(BinaryCode::from_codebook_str("2 1\n00\n").is_err());
    }
}
