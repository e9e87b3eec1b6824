//! The randomized comparison model.
//!
//! A landmark pair `(p, q)` compared against the ideal point `x` reports
//! `+1` when `x` is at least as close to `p` as to `q`. Expanding the squared
//! distances turns this into a halfspace test
//!
//! ```text
//! sign(‖x − q‖² − ‖x − p‖²) = sign(a·x − τ),
//! a = (p − q) / ‖p − q‖,   τ = (‖p‖² − ‖q‖²) / (2‖p − q‖),
//! ```
//!
//! so everything downstream works with the normalized `(a, τ)` form stored
//! in a [`ComparisonFrame`].

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{dot, norm_sq};
use crate::seed;
use crate::{Error, Result};

/// Pairs closer than this are treated as coincident.
pub const DEGENERATE_PAIR_TOL: f64 = 1e-12;

/// Maximum redraws of a coincident pair before giving up.
pub const MAX_PAIR_REDRAWS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ItemPair {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

impl ItemPair {
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if p.len() != q.len() {
            return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
        }
        if p.is_empty() {
            return Err(Error::invalid("item dimension must be at least 1"));
        }
        Ok(ItemPair { p, q })
    }

    pub fn dim(&self) -> usize {
        self.p.len()
    }

    pub fn separation(&self) -> f64 {
        self.p.iter().zip(&self.q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }
}

/// Where a frame's hyperplanes came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Gaussian { mean: Vec<f64>, variance: f64, seed: u64 },
    External,
}

/// `m` normalized comparison hyperplanes `{w : a_i·w = τ_i}` in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonFrame {
    dim: usize,
    // row-major m × n
    normals: Vec<f64>,
    offsets: Vec<f64>,
    provenance: Provenance,
}

impl ComparisonFrame {
    /// Builds a frame from already-normalized hyperplanes.
    pub fn from_hyperplanes(dim: usize, normals: Vec<f64>, offsets: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("frame dimension must be at least 1"));
        }
        if normals.len() != dim * offsets.len() {
            return Err(Error::LengthMismatch { left: normals.len(), right: dim * offsets.len() });
        }
        for (i, row) in normals.chunks(dim).enumerate() {
            let len = norm_sq(row).sqrt();
            if (len - 1.0).abs() > 1e-12 {
                return Err(Error::invalid(format!("normal {i} has norm {len}, expected 1")));
            }
        }
        if let Some(i) = offsets.iter().position(|t| !t.is_finite()) {
            return Err(Error::invalid(format!("offset {i} is not finite")));
        }
        Ok(ComparisonFrame { dim, normals, offsets, provenance: Provenance::External })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn normal(&self, i: usize) -> &[f64] {
        &self.normals[i * self.dim..(i + 1) * self.dim]
    }

    pub fn offset(&self, i: usize) -> f64 {
        self.offsets[i]
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn normals(&self) -> impl Iterator<Item = &[f64]> {
        self.normals.chunks(self.dim)
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Signed margins `a_i·x − τ_i`.
    pub fn margins(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self.normals().zip(&self.offsets).map(|(a, t)| dot(a, x) - t).collect())
    }

    /// The same hyperplanes in coordinates centered at `center`: offsets
    /// become `τ_i − a_i·center`.
    pub fn recentered(&self, center: &[f64]) -> Result<ComparisonFrame> {
        self.check_dim(center)?;
        let offsets = self.normals().zip(&self.offsets).map(|(a, t)| t - dot(a, center)).collect();
        Ok(ComparisonFrame {
            dim: self.dim,
            normals: self.normals.clone(),
            offsets,
            provenance: self.provenance.clone(),
        })
    }

    /// Frame with all offsets multiplied by `c`.
    pub fn scaled_offsets(&self, c: f64) -> ComparisonFrame {
        ComparisonFrame {
            dim: self.dim,
            normals: self.normals.clone(),
            offsets: self.offsets.iter().map(|t| t * c).collect(),
            provenance: Provenance::External,
        }
    }

    pub(crate) fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.len() });
        }
        Ok(())
    }

    /// Writes the frame as CSV: a `# n=.. m=.. sigma2=.. seed=..` header,
    /// then one `a_1,…,a_n,tau` row per comparison.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let (sigma2, seed, mean) = match &self.provenance {
            Provenance::Gaussian { mean, variance, seed } => {
                (variance.to_string(), seed.to_string(), Some(mean))
            }
            Provenance::External => ("external".to_string(), "external".to_string(), None),
        };
        writeln!(out, "# n={} m={} sigma2={} seed={}", self.dim, self.len(), sigma2, seed)?;
        if let Some(mean) = mean.filter(|m| m.iter().any(|v| *v != 0.0)) {
            let joined: Vec<String> = mean.iter().map(|v| v.to_string()).collect();
            writeln!(out, "# mean={}", joined.join(","))?;
        }
        let mut line = String::new();
        for (a, t) in self.normals().zip(&self.offsets) {
            line.clear();
            for v in a {
                write!(line, "{v},").unwrap();
            }
            write!(line, "{t}").unwrap();
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<ComparisonFrame> {
        let mut dim = None;
        let mut expected_m = None;
        let mut sigma2 = None;
        let mut seed = None;
        let mut mean = None;
        let mut normals = Vec::new();
        let mut offsets = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            let parse_err = |msg: String| Error::Parse { line: lineno + 1, msg };
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                for field in comment.split_whitespace() {
                    let Some((key, value)) = field.split_once('=') else { continue };
                    match key {
                        "n" => dim = Some(value.parse::<usize>().map_err(|e| parse_err(e.to_string()))?),
                        "m" => expected_m = Some(value.parse::<usize>().map_err(|e| parse_err(e.to_string()))?),
                        "sigma2" => sigma2 = value.parse::<f64>().ok(),
                        "seed" => seed = value.parse::<u64>().ok(),
                        "mean" => {
                            let parsed: std::result::Result<Vec<f64>, _> =
                                value.split(',').map(str::parse::<f64>).collect();
                            mean = Some(parsed.map_err(|e| parse_err(e.to_string()))?);
                        }
                        _ => {}
                    }
                }
                continue;
            }
            let n = dim.ok_or_else(|| parse_err("data row before header".into()))?;
            let values: std::result::Result<Vec<f64>, _> =
                line.split(',').map(|s| s.trim().parse::<f64>()).collect();
            let values = values.map_err(|e| parse_err(e.to_string()))?;
            if values.len() != n + 1 {
                return Err(parse_err(format!("expected {} columns, found {}", n + 1, values.len())));
            }
            normals.extend_from_slice(&values[..n]);
            offsets.push(values[n]);
        }
        let dim = dim.ok_or_else(|| Error::Parse { line: 0, msg: "missing header".into() })?;
        if let Some(m) = expected_m {
            if m != offsets.len() {
                return Err(Error::LengthMismatch { left: m, right: offsets.len() });
            }
        }
        let frame = ComparisonFrame::from_hyperplanes(dim, normals, offsets)?;
        Ok(match (sigma2, seed) {
            (Some(variance), Some(seed)) => frame.with_provenance(Provenance::Gaussian {
                mean: mean.unwrap_or_else(|| vec![0.0; dim]),
                variance,
                seed,
            }),
            _ => frame,
        })
    }
}

/// A vector of comparison outcomes, each `+1` or `−1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(i) = signs.iter().position(|s| *s != 1 && *s != -1) {
            return Err(Error::invalid(format!("entry {i} is {}, expected ±1", signs[i])));
        }
        Ok(SignVector(signs))
    }

    /// Sign of each value with the convention `sign(0) = +1`.
    pub fn from_values(values: &[f64]) -> Self {
        SignVector(values.iter().map(|v| sign(*v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn negated(&self) -> SignVector {
        SignVector(self.0.iter().map(|s| -s).collect())
    }

    /// Negates the entries at `indices`.
    pub fn flip(&mut self, indices: &[usize]) {
        for &i in indices {
            self.0[i] = -self.0[i];
        }
    }

    pub fn write_lines<W: Write>(&self, mut out: W) -> Result<()> {
        for s in &self.0 {
            writeln!(out, "{s}")?;
        }
        Ok(())
    }

    pub fn read_lines<R: BufRead>(input: R) -> Result<SignVector> {
        let mut signs = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let s = match line {
                "1" | "+1" => 1,
                "-1" => -1,
                other => {
                    return Err(Error::Parse { line: lineno + 1, msg: format!("expected ±1, found {other:?}") })
                }
            };
            signs.push(s);
        }
        Ok(SignVector(signs))
    }
}

#[inline]
pub fn sign(v: f64) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

/// Draws `m` landmark pairs with every coordinate i.i.d. `N(mean_j, variance)`.
/// A pair closer than [`DEGENERATE_PAIR_TOL`] is redrawn up to
/// [`MAX_PAIR_REDRAWS`] times.
pub fn sample_pairs(m: usize, n: usize, mean: &[f64], variance: f64, seed: u64) -> Result<Vec<ItemPair>> {
    if m == 0 {
        return Err(Error::invalid("m must be at least 1"));
    }
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if !(variance > 0.0) || !variance.is_finite() {
        return Err(Error::invalid(format!("variance must be positive, got {variance}")));
    }
    if mean.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: mean.len() });
    }
    let sd = variance.sqrt();
    let mut rng = seed::rng(seed);
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
        mean.iter().map(|mu| mu + sd * rng.sample::<f64, _>(StandardNormal)).collect()
    };
    let mut pairs = Vec::with_capacity(m);
    for i in 0..m {
        let mut attempt = 0;
        loop {
            let pair = ItemPair { p: draw(&mut rng), q: draw(&mut rng) };
            if pair.separation() >= DEGENERATE_PAIR_TOL {
                pairs.push(pair);
                break;
            }
            attempt += 1;
            if attempt > MAX_PAIR_REDRAWS {
                return Err(Error::DegeneratePair(format!(
                    "pair {i} coincided on {attempt} consecutive draws"
                )));
            }
        }
    }
    Ok(pairs)
}

/// Reduces landmark pairs to normalized bisector hyperplanes.
pub fn derive_frame(pairs: &[ItemPair]) -> Result<ComparisonFrame> {
    let n = pairs.first().map(ItemPair::dim).unwrap_or(1);
    let mut normals = Vec::with_capacity(pairs.len() * n);
    let mut offsets = Vec::with_capacity(pairs.len());
    for (i, pair) in pairs.iter().enumerate() {
        if pair.p.len() != n || pair.q.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: pair.p.len().max(pair.q.len()) });
        }
        let gap = pair.separation();
        if gap < DEGENERATE_PAIR_TOL {
            return Err(Error::DegeneratePair(format!("pair {i} has ‖p − q‖ = {gap:e}")));
        }
        normals.extend(pair.p.iter().zip(&pair.q).map(|(p, q)| (p - q) / gap));
        offsets.push((norm_sq(&pair.p) - norm_sq(&pair.q)) / (2.0 * gap));
    }
    Ok(ComparisonFrame { dim: n, normals, offsets, provenance: Provenance::External })
}

/// `sample_pairs` followed by `derive_frame`, keeping the generation
/// parameters as provenance.
pub fn generate_frame(m: usize, n: usize, mean: &[f64], variance: f64, seed: u64) -> Result<ComparisonFrame> {
    let pairs = sample_pairs(m, n, mean, variance, seed)?;
    Ok(derive_frame(&pairs)?.with_provenance(Provenance::Gaussian { mean: mean.to_vec(), variance, seed }))
}

/// Noise-free observations `sign(a_i·x − τ_i)`.
pub fn observe(x: &[f64], frame: &ComparisonFrame) -> Result<SignVector> {
    Ok(SignVector::from_values(&frame.margins(x)?))
}

/// Observations computed directly from distances,
/// `sign(‖x − q_i‖² − ‖x − p_i‖²)`.
pub fn observe_pairs(x: &[f64], pairs: &[ItemPair]) -> Result<SignVector> {
    let mut signs = Vec::with_capacity(pairs.len());
    for pair in pairs {
        if pair.dim() != x.len() {
            return Err(Error::DimensionMismatch { expected: pair.dim(), found: x.len() });
        }
        let dq: f64 = x.iter().zip(&pair.q).map(|(a, b)| (a - b) * (a - b)).sum();
        let dp: f64 = x.iter().zip(&pair.p).map(|(a, b)| (a - b) * (a - b)).sum();
        signs.push(sign(dq - dp));
    }
    Ok(SignVector(signs))
}

/// Fraction of positions where the two sign vectors differ.
pub fn hamming(s1: &SignVector, s2: &SignVector) -> Result<f64> {
    if s1.len() != s2.len() {
        return Err(Error::LengthMismatch { left: s1.len(), right: s2.len() });
    }
    if s1.is_empty() {
        return Ok(0.0);
    }
    let differing = s1.0.iter().zip(&s2.0).filter(|(a, b)| a != b).count();
    Ok(differing as f64 / s1.len() as f64)
}
