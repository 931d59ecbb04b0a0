//! 2x2 matrices over [`QSeries`] (Laurent entries allowed), used for
//! connection and Frobenius matrices.

use crate::coeff::Rat;
use crate::error::Result;
use crate::qseries::{Prec, QSeries};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat2 {
    entries: [[QSeries; 2]; 2],
}

impl Mat2 {
    pub fn new(e11: QSeries, e12: QSeries, e21: QSeries, e22: QSeries) -> Self {
        Mat2 {
            entries: [[e11, e12], [e21, e22]],
        }
    }

    pub fn identity(prec: Prec) -> Self {
        Mat2::new(
            QSeries::one(prec),
            QSeries::zero(prec),
            QSeries::zero(prec),
            QSeries::one(prec),
        )
    }

    pub fn zero(prec: Prec) -> Self {
        Mat2::new(
            QSeries::zero(prec),
            QSeries::zero(prec),
            QSeries::zero(prec),
            QSeries::zero(prec),
        )
    }

    /// 1-indexed access.
    pub fn at(&self, r: usize, c: usize) -> &QSeries {
        &self.entries[r - 1][c - 1]
    }

    pub fn prec(&self) -> Prec {
        self.entries[0][0].prec()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|e| e.neg())
    }

    fn zip(&self, other: &Self, f: impl Fn(&QSeries, &QSeries) -> QSeries) -> Self {
        Mat2::new(
            f(self.at(1, 1), other.at(1, 1)),
            f(self.at(1, 2), other.at(1, 2)),
            f(self.at(2, 1), other.at(2, 1)),
            f(self.at(2, 2), other.at(2, 2)),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let dot = |r: usize, c: usize| -> Result<QSeries> {
            Ok(self
                .at(r, 1)
                .mul(other.at(1, c))?
                .add(&self.at(r, 2).mul(other.at(2, c))?))
        };
        Ok(Mat2::new(dot(1, 1)?, dot(1, 2)?, dot(2, 1)?, dot(2, 2)?))
    }

    pub fn scale_series(&self, s: &QSeries) -> Result<Self> {
        Ok(Mat2::new(
            self.at(1, 1).mul(s)?,
            self.at(1, 2).mul(s)?,
            self.at(2, 1).mul(s)?,
            self.at(2, 2).mul(s)?,
        ))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        self.map(|e| e.scale(r))
    }

    pub fn map(&self, f: impl Fn(&QSeries) -> QSeries) -> Self {
        Mat2::new(
            f(self.at(1, 1)),
            f(self.at(1, 2)),
            f(self.at(2, 1)),
            f(self.at(2, 2)),
        )
    }

    pub fn try_map(&self, f: impl Fn(&QSeries) -> Result<QSeries>) -> Result<Self> {
        Ok(Mat2::new(
            f(self.at(1, 1))?,
            f(self.at(1, 2))?,
            f(self.at(2, 1))?,
            f(self.at(2, 2))?,
        ))
    }

    pub fn frob(&self) -> Result<Self> {
        self.try_map(|e| e.frob())
    }

    pub fn gamma(&self) -> Self {
        self.map(|e| e.gamma())
    }

    pub fn det(&self) -> Result<QSeries> {
        Ok(self
            .at(1, 1)
            .mul(self.at(2, 2))?
            .sub(&self.at(1, 2).mul(self.at(2, 1))?))
    }

    /// Adjugate: `[[d, -b], [-c, a]]`.
    pub fn adjugate(&self) -> Self {
        Mat2::new(
            self.at(2, 2).clone(),
            self.at(1, 2).neg(),
            self.at(2, 1).neg(),
            self.at(1, 1).clone(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_zero())
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Apply to a column vector: `M (v1, v2)^T`.
    pub fn apply(&self, v: (&QSeries, &QSeries)) -> Result<(QSeries, QSeries)> {
        Ok((
            self.at(1, 1).mul(v.0)?.add(&self.at(1, 2).mul(v.1)?),
            self.at(2, 1).mul(v.0)?.add(&self.at(2, 2).mul(v.1)?),
        ))
    }

    pub fn reduce_mod_eps(&self) -> Self {
        self.map(|e| e.reduce_mod_eps())
    }

    /// Slice of each entry at the given eps exponent.
    pub fn eps_slice(&self, i: u32) -> Self {
        self.map(|e| e.eps_slice(i))
    }

    /// Worst p-integrality violation over all four entries.
    pub fn integrality_scan(&self) -> Option<crate::qseries::Deficit> {
        let mut worst: Option<crate::qseries::Deficit> = None;
        for e in self.entries.iter().flatten() {
            if let Some(d) = e.integrality_scan() {
                if worst.as_ref().map_or(true, |w| d.shortfall() > w.shortfall()) {
                    worst = Some(d);
                }
            }
        }
        worst
    }
}
