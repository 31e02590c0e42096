//! The measure algebra `M(H)` and function space `C(H)` of a finite table.
//!
//! On a finite discrete carrier every bounded function is continuous and
//! compactly supported, so signed rational weight vectors realize all of
//! `M(H, ℝ)` and rational value vectors all of `C_C(H, ℝ)`. Convolution
//! extends bilinearly from the table rows; the translate `μ∗f` is the
//! pointwise form `(μ∗f)(y) = Σ_x μ_x Σ_z c[x][y][z] f(z)`, the discrete
//! convention under which left-invariance of a measure λ reads
//! `Σ_y c[x][y][z] λ_y = λ_z`.

use num::{Signed, Zero};

use crate::hypergroup::ConvolutionTable;
use crate::rational::Rational;

/// A signed measure: one rational weight per element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    weights: Vec<Rational>,
}

impl Measure {
    pub fn new(weights: Vec<Rational>) -> Self {
        Self { weights }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            weights: vec![Rational::zero(); n],
        }
    }

    /// The point mass `δ_x`.
    pub fn point_mass(n: usize, x: usize) -> Self {
        let mut weights = vec![Rational::zero(); n];
        weights[x] = Rational::from_integer(1.into());
        Self { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, x: usize) -> &Rational {
        &self.weights[x]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<Rational> {
        self.weights
    }

    /// Total mass `μ(H) = Σ_x μ_x`.
    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    /// Total variation `‖μ‖ = Σ_x |μ_x|`.
    pub fn norm(&self) -> Rational {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.weights.iter().all(|w| !w.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(Zero::is_zero)
    }

    /// Jordan decomposition `μ = μ₊ − μ₋` into positive parts with
    /// disjoint supports, so that `‖μ‖ = μ₊(H) + μ₋(H)`.
    pub fn jordan(&self) -> (Measure, Measure) {
        let mut pos = Vec::with_capacity(self.weights.len());
        let mut neg = Vec::with_capacity(self.weights.len());
        for w in &self.weights {
            if w.is_negative() {
                pos.push(Rational::zero());
                neg.push(-w.clone());
            } else {
                pos.push(w.clone());
                neg.push(Rational::zero());
            }
        }
        (Measure::new(pos), Measure::new(neg))
    }

    pub fn scaled(&self, factor: &Rational) -> Measure {
        Measure::new(self.weights.iter().map(|w| w * factor).collect())
    }

    pub fn add(&self, other: &Measure) -> Measure {
        assert_eq!(self.len(), other.len());
        Measure::new(
            self.weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Measure) -> Measure {
        assert_eq!(self.len(), other.len());
        Measure::new(
            self.weights
                .iter()
                .zip(&other.weights)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.weights.iter().map(crate::rational::to_f64).collect()
    }

    /// Exact rational image of a binary64 vector.
    pub fn from_f64(weights: &[f64]) -> Measure {
        Measure::new(
            weights
                .iter()
                .map(|&w| Rational::from_float(w).expect("finite weight"))
                .collect(),
        )
    }
}

/// A rational-valued function on the elements; all of `C(H)` in the
/// finite discrete case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionOnH {
    values: Vec<Rational>,
}

impl FunctionOnH {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    pub fn constant(n: usize, value: Rational) -> Self {
        Self {
            values: vec![value; n],
        }
    }

    /// The indicator of a single element.
    pub fn indicator(n: usize, x: usize) -> Self {
        let mut values = vec![Rational::zero(); n];
        values[x] = Rational::from_integer(1.into());
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, x: usize) -> &Rational {
        &self.values[x]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Pointwise `f ≤ g`.
    pub fn le(&self, other: &FunctionOnH) -> bool {
        assert_eq!(self.len(), other.len());
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}

impl ConvolutionTable {
    /// Bilinear convolution `(μ∗ν)_z = Σ_{x,y} μ_x ν_y c[x][y][z]`.
    pub fn convolve_measures(&self, mu: &Measure, nu: &Measure) -> Measure {
        let n = self.len();
        assert_eq!(mu.len(), n);
        assert_eq!(nu.len(), n);
        let mut out = vec![Rational::zero(); n];
        for x in 0..n {
            if mu.weight(x).is_zero() {
                continue;
            }
            for y in 0..n {
                if nu.weight(y).is_zero() {
                    continue;
                }
                let scale = mu.weight(x) * nu.weight(y);
                let row = self.conv_row(x, y);
                for (z, out_z) in out.iter_mut().enumerate() {
                    if !row[z].is_zero() {
                        *out_z += &scale * &row[z];
                    }
                }
            }
        }
        Measure::new(out)
    }

    /// `μ̌`, the pushforward of μ under the involution: `(μ̌)_z = μ_{ž}`.
    pub fn involute_measure(&self, mu: &Measure) -> Measure {
        assert_eq!(mu.len(), self.len());
        Measure::new(
            (0..self.len())
                .map(|z| mu.weight(self.involute(z)).clone())
                .collect(),
        )
    }

    /// The point translate `(δ_x∗f)(y) = Σ_z c[x][y][z] f(z)`.
    pub fn translate_point(&self, x: usize, f: &FunctionOnH) -> FunctionOnH {
        let n = self.len();
        assert_eq!(f.len(), n);
        FunctionOnH::new(
            (0..n)
                .map(|y| {
                    self.conv_row(x, y)
                        .iter()
                        .zip(f.values())
                        .filter(|(c, _)| !c.is_zero())
                        .map(|(c, v)| c * v)
                        .sum()
                })
                .collect(),
        )
    }

    /// The translate `μ∗f`, linear in both arguments.
    pub fn translate(&self, mu: &Measure, f: &FunctionOnH) -> FunctionOnH {
        let n = self.len();
        assert_eq!(mu.len(), n);
        assert_eq!(f.len(), n);
        let mut out = vec![Rational::zero(); n];
        for x in 0..n {
            if mu.weight(x).is_zero() {
                continue;
            }
            let translated = self.translate_point(x, f);
            for (acc, v) in out.iter_mut().zip(translated.values()) {
                if !v.is_zero() {
                    *acc += mu.weight(x) * v;
                }
            }
        }
        FunctionOnH::new(out)
    }
}

/// The pairing `⟨w, f⟩ = Σ_x w_x f(x)` realizing linear functionals on
/// `C(H)` as weight vectors.
pub fn integrate(w: &Measure, f: &FunctionOnH) -> Rational {
    assert_eq!(w.len(), f.len());
    w.weights()
        .iter()
        .zip(f.values())
        .filter(|(wx, fx)| !wx.is_zero() && !fx.is_zero())
        .map(|(wx, fx)| wx * fx)
        .sum()
}
