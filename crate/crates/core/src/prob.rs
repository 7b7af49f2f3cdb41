//! Finite-alphabet probability primitives.
//!
//! All information quantities are reported in bits. Distributions are
//! immutable once constructed; every operation here is a pure function.
//!
//! Product alphabets (see [`tensor_product`]) use the fixed index map
//! `(a, b) -> a * |second| + b` on both the X and the Y axis.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Input PMFs may deviate from unit mass by this much before being rejected.
/// Accepted inputs are renormalized.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// One term of a divergence between normalized vectors, in nats, written as
/// `q ln(q/p) - q + p`. The extra terms sum to zero but make every summand
/// nonnegative and second order in `q - p`, so rounding noise in nearly equal
/// inputs does not leak into the result.
pub(crate) fn kl_term_nats(q: f64, p: f64) -> f64 {
    if q > 0.0 {
        let r = q / p;
        (p * (r * (r - 1.0).ln_1p() - (r - 1.0))).max(0.0)
    } else {
        p
    }
}

fn validate_and_normalize(mut probs: Vec<f64>) -> Result<Vec<f64>> {
    if probs.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    for (index, &value) in probs.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidProbability { index, value });
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized { sum });
    }
    for p in probs.iter_mut() {
        *p /= sum;
    }
    Ok(probs)
}

/// A probability vector over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionRepr")]
pub struct Distribution {
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct DistributionRepr {
    probs: Vec<f64>,
}

impl TryFrom<DistributionRepr> for Distribution {
    type Error = Error;

    fn try_from(repr: DistributionRepr) -> Result<Self> {
        Distribution::new(repr.probs)
    }
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Ok(Self {
            probs: validate_and_normalize(probs)?,
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    pub fn point_mass(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: index + 1,
            });
        }
        let mut probs = vec![0.0; n];
        probs[index] = 1.0;
        Ok(Self { probs })
    }

    /// Bernoulli(p) as the distribution `[1 - p, p]`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        Self::new(vec![1.0 - p, p])
    }

    /// Skips validation; callers guarantee a non-negative vector with unit mass.
    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        debug_assert!(!probs.is_empty());
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn has_full_support(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }
}

/// Entropy in bits, with `0 log 0 = 0`.
pub fn entropy(p: &Distribution) -> f64 {
    -p.probs
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

/// Binary entropy function in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Relative entropy `D(q || p)` in bits.
///
/// `p` must have full support; the joint constructors guarantee this for
/// every marginal, so the result is always finite.
pub fn kl_divergence(q: &Distribution, p: &Distribution) -> Result<f64> {
    if q.alphabet_size() != p.alphabet_size() {
        return Err(Error::DimensionMismatch {
            expected: p.alphabet_size(),
            got: q.alphabet_size(),
        });
    }
    if let Some(index) = p.probs.iter().position(|&x| x <= 0.0) {
        return Err(Error::ZeroReference { index });
    }
    let d: f64 = q
        .probs
        .iter()
        .zip(&p.probs)
        .map(|(&qi, &pi)| kl_term_nats(qi, pi))
        .sum();
    Ok(d / LN_2)
}

/// Total variation distance, `½ Σ |q - p|`.
pub fn total_variation(q: &[f64], p: &[f64]) -> f64 {
    0.5 * q.iter().zip(p).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Which conditional of a joint a channel represents, and equivalently
/// which ordered pair an SDPI constant refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `P_{Y|X}`; selects `s*(X;Y)`.
    XToY,
    /// `P_{X|Y}`; selects `s*(Y;X)`.
    YToX,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::XToY => "s*(X;Y)",
            Direction::YToX => "s*(Y;X)",
        }
    }
}

/// A row-stochastic matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Channel {
    input_size: usize,
    output_size: usize,
    rows: Vec<f64>,
    direction: Direction,
}

impl Channel {
    /// Builds a channel from its rows. Each row must be a valid PMF.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let input_size = rows.len();
        if input_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let output_size = rows[0].len();
        let mut flat = Vec::with_capacity(input_size * output_size);
        for row in rows {
            if row.len() != output_size {
                return Err(Error::DimensionMismatch {
                    expected: output_size,
                    got: row.len(),
                });
            }
            flat.extend(validate_and_normalize(row)?);
        }
        Ok(Self {
            input_size,
            output_size,
            rows: flat,
            direction: Direction::XToY,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
        )
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn row(&self, input: usize) -> &[f64] {
        &self.rows[input * self.output_size..(input + 1) * self.output_size]
    }

    pub fn get(&self, input: usize, output: usize) -> f64 {
        self.rows[input * self.output_size + output]
    }

    /// Serial composition: this channel followed by `next`.
    pub fn compose(&self, next: &Channel) -> Result<Channel> {
        if next.input_size != self.output_size {
            return Err(Error::DimensionMismatch {
                expected: self.output_size,
                got: next.input_size,
            });
        }
        let rows = (0..self.input_size)
            .map(|x| {
                (0..next.output_size)
                    .map(|z| {
                        (0..self.output_size)
                            .map(|y| self.get(x, y) * next.get(y, z))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        Channel::new(rows)
    }
}

/// A joint PMF over `X × Y`, stored row-major (`x` indexes rows).
///
/// Both marginals are guaranteed to have full support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JointRepr")]
pub struct JointDistribution {
    x_size: usize,
    y_size: usize,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct JointRepr {
    x_size: usize,
    y_size: usize,
    probs: Vec<f64>,
}

impl TryFrom<JointRepr> for JointDistribution {
    type Error = Error;

    fn try_from(repr: JointRepr) -> Result<Self> {
        JointDistribution::new(repr.x_size, repr.y_size, repr.probs)
    }
}

impl JointDistribution {
    pub fn new(x_size: usize, y_size: usize, probs: Vec<f64>) -> Result<Self> {
        if x_size == 0 || y_size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if probs.len() != x_size * y_size {
            return Err(Error::DimensionMismatch {
                expected: x_size * y_size,
                got: probs.len(),
            });
        }
        let probs = validate_and_normalize(probs)?;
        let joint = Self {
            x_size,
            y_size,
            probs,
        };
        let (px, py) = joint.marginal_vecs();
        if let Some(index) = px.iter().position(|&p| p <= 0.0) {
            return Err(Error::ZeroMarginal { which: "X", index });
        }
        if let Some(index) = py.iter().position(|&p| p <= 0.0) {
            return Err(Error::ZeroMarginal { which: "Y", index });
        }
        Ok(joint)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let x_size = rows.len();
        let y_size = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != y_size) {
            return Err(Error::DimensionMismatch {
                expected: y_size,
                got: bad.len(),
            });
        }
        Self::new(x_size, y_size, rows.concat())
    }

    /// `P_X ⊗ P_Y`.
    pub fn independent(px: &Distribution, py: &Distribution) -> Result<Self> {
        let probs = px
            .probs()
            .iter()
            .flat_map(|&a| py.probs().iter().map(move |&b| a * b))
            .collect();
        Self::new(px.alphabet_size(), py.alphabet_size(), probs)
    }

    /// The joint of `Y = X` with `X ~ p`.
    pub fn diagonal(p: &Distribution) -> Result<Self> {
        let n = p.alphabet_size();
        let mut probs = vec![0.0; n * n];
        for (i, &v) in p.probs().iter().enumerate() {
            probs[i * n + i] = v;
        }
        Self::new(n, n, probs)
    }

    /// `P_X(x) W(y|x)`.
    pub fn from_channel(px: &Distribution, channel: &Channel) -> Result<Self> {
        if px.alphabet_size() != channel.input_size() {
            return Err(Error::DimensionMismatch {
                expected: channel.input_size(),
                got: px.alphabet_size(),
            });
        }
        let probs = (0..channel.input_size())
            .flat_map(|x| channel.row(x).iter().map(move |&w| px.probs()[x] * w))
            .collect();
        Self::new(channel.input_size(), channel.output_size(), probs)
    }

    /// Doubly symmetric binary source with crossover `p`.
    pub fn doubly_symmetric_binary(p: f64) -> Result<Self> {
        Self::new(
            2,
            2,
            vec![(1.0 - p) / 2.0, p / 2.0, p / 2.0, (1.0 - p) / 2.0],
        )
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.probs[x * self.y_size + y]
    }

    pub fn transpose(&self) -> Self {
        let mut probs = vec![0.0; self.probs.len()];
        for x in 0..self.x_size {
            for y in 0..self.y_size {
                probs[y * self.x_size + x] = self.get(x, y);
            }
        }
        Self {
            x_size: self.y_size,
            y_size: self.x_size,
            probs,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.x_size == self.y_size
            && (0..self.x_size)
                .all(|x| (0..x).all(|y| (self.get(x, y) - self.get(y, x)).abs() <= 1e-15))
    }

    fn marginal_vecs(&self) -> (Vec<f64>, Vec<f64>) {
        let mut px = vec![0.0; self.x_size];
        let mut py = vec![0.0; self.y_size];
        for x in 0..self.x_size {
            for y in 0..self.y_size {
                let p = self.get(x, y);
                px[x] += p;
                py[y] += p;
            }
        }
        (px, py)
    }

    /// `(P_X, P_Y)`.
    pub fn marginals(&self) -> (Distribution, Distribution) {
        let (px, py) = self.marginal_vecs();
        (Distribution::from_raw(px), Distribution::from_raw(py))
    }

    /// `P_{Y|X}` for [`Direction::XToY`], `P_{X|Y}` for [`Direction::YToX`].
    pub fn conditional(&self, direction: Direction) -> Channel {
        let oriented = match direction {
            Direction::XToY => self.clone(),
            Direction::YToX => self.transpose(),
        };
        let (px, _) = oriented.marginal_vecs();
        let rows = (0..oriented.x_size)
            .flat_map(|x| {
                let mass = px[x];
                oriented.probs[x * oriented.y_size..(x + 1) * oriented.y_size]
                    .iter()
                    .map(move |&p| p / mass)
            })
            .collect();
        Channel {
            input_size: oriented.x_size,
            output_size: oriented.y_size,
            rows,
            direction,
        }
    }
}

/// Output distribution of `q` sent through `channel`.
pub fn push_forward(q: &Distribution, channel: &Channel) -> Result<Distribution> {
    if q.alphabet_size() != channel.input_size() {
        return Err(Error::DimensionMismatch {
            expected: channel.input_size(),
            got: q.alphabet_size(),
        });
    }
    let mut out = vec![0.0; channel.output_size()];
    push_forward_into(q.probs(), channel, &mut out);
    Ok(Distribution::from_raw(out))
}

pub(crate) fn push_forward_into(q: &[f64], channel: &Channel, out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    for (x, &qx) in q.iter().enumerate() {
        if qx == 0.0 {
            continue;
        }
        for (o, &w) in out.iter_mut().zip(channel.row(x)) {
            *o += qx * w;
        }
    }
}

/// `I(X;Y)` in bits.
pub fn mutual_information(j: &JointDistribution) -> f64 {
    let (px, py) = j.marginal_vecs();
    let mut total = 0.0;
    for x in 0..j.x_size {
        for y in 0..j.y_size {
            total += kl_term_nats(j.get(x, y), px[x] * py[y]);
        }
    }
    total / LN_2
}

/// `I(A;B)` for a raw row-major joint whose marginals may contain zeros.
pub(crate) fn mutual_information_raw(a_size: usize, b_size: usize, probs: &[f64]) -> f64 {
    let mut pa = vec![0.0; a_size];
    let mut pb = vec![0.0; b_size];
    for a in 0..a_size {
        for b in 0..b_size {
            pa[a] += probs[a * b_size + b];
            pb[b] += probs[a * b_size + b];
        }
    }
    let mut total = 0.0;
    for a in 0..a_size {
        for b in 0..b_size {
            total += kl_term_nats(probs[a * b_size + b], pa[a] * pb[b]);
        }
    }
    total / LN_2
}

/// Joint of the pair `((X1, X2), (Y1, Y2))` for independent `j1`, `j2`.
///
/// Index layout: `x = x1 * |X2| + x2` and `y = y1 * |Y2| + y2`.
pub fn tensor_product(j1: &JointDistribution, j2: &JointDistribution) -> JointDistribution {
    let x_size = j1.x_size * j2.x_size;
    let y_size = j1.y_size * j2.y_size;
    let mut probs = vec![0.0; x_size * y_size];
    for x1 in 0..j1.x_size {
        for x2 in 0..j2.x_size {
            let x = x1 * j2.x_size + x2;
            for y1 in 0..j1.y_size {
                for y2 in 0..j2.y_size {
                    let y = y1 * j2.y_size + y2;
                    probs[x * y_size + y] = j1.get(x1, y1) * j2.get(x2, y2);
                }
            }
        }
    }
    JointDistribution {
        x_size,
        y_size,
        probs,
    }
}

/// Tensor product of two distributions with the same index layout.
pub fn product_distribution(a: &Distribution, b: &Distribution) -> Distribution {
    Distribution::from_raw(
        a.probs()
            .iter()
            .flat_map(|&u| b.probs().iter().map(move |&v| u * v))
            .collect(),
    )
}
