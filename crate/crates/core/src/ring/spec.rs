use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::{Error, Result};

/// Exponent vector over the generators of a [`RingSpec`], laid out as
/// `[nilpotent.., units.., N_1..N_M, t..]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub SmallVec<[i32; 8]>);

impl Monomial {
    pub fn zeros(len: usize) -> Self {
        Monomial(SmallVec::from_elem(0, len))
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }
}

/// Cutoffs for the Newton generators `N_1..N_M` of the λ-algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaCutoff {
    pub max_index: u32,
    pub weight_cutoff: u32,
}

/// Presentation of a finite-dimensional (in the nilpotent directions)
/// coefficient ring: nilpotent generators `ν^n = 0`, Laurent units,
/// weight-truncated Newton generators and power-series `t` variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    #[serde(default)]
    pub nilpotent: Vec<(String, u32)>,
    #[serde(default)]
    pub units: Vec<String>,
    #[serde(default = "no_lambda")]
    pub lambda: LambdaCutoff,
    #[serde(default)]
    pub t_vars: Vec<(String, u32)>,
}

fn no_lambda() -> LambdaCutoff {
    LambdaCutoff {
        max_index: 0,
        weight_cutoff: 0,
    }
}

/// Which block of the monomial layout a generator lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    Nilpotent,
    Unit,
    Newton,
    T,
}

impl RingSpec {
    pub fn builder() -> RingSpecBuilder {
        RingSpecBuilder::default()
    }

    /// ℚ with no generators at all.
    pub fn rationals() -> Arc<RingSpec> {
        RingSpec::builder().build().expect("empty spec is valid")
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        let names = self
            .nilpotent
            .iter()
            .map(|(n, _)| n)
            .chain(self.units.iter())
            .chain(self.t_vars.iter().map(|(n, _)| n));
        for name in names {
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::InvalidSpec(format!("bad generator name {name:?}")));
            }
            if is_newton_name(name) {
                return Err(Error::InvalidSpec(format!(
                    "generator name {name:?} collides with Newton generators"
                )));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::InvalidSpec(format!("duplicate generator {name:?}")));
            }
        }
        if let Some((n, _)) = self.nilpotent.iter().find(|(_, o)| *o == 0) {
            return Err(Error::InvalidSpec(format!("nilpotent order of {n} must be ≥ 1")));
        }
        if let Some((n, _)) = self.t_vars.iter().find(|(_, o)| *o == 0) {
            return Err(Error::InvalidSpec(format!("truncation order of {n} must be ≥ 1")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nilpotent.len() + self.units.len() + self.lambda.max_index as usize + self.t_vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nil_range(&self) -> Range<usize> {
        0..self.nilpotent.len()
    }

    pub fn unit_range(&self) -> Range<usize> {
        let s = self.nilpotent.len();
        s..s + self.units.len()
    }

    pub fn newton_range(&self) -> Range<usize> {
        let s = self.nilpotent.len() + self.units.len();
        s..s + self.lambda.max_index as usize
    }

    pub fn t_range(&self) -> Range<usize> {
        let s = self.nilpotent.len() + self.units.len() + self.lambda.max_index as usize;
        s..s + self.t_vars.len()
    }

    /// Position of a named generator in the monomial layout. Newton
    /// generators are addressed as `N1`, `N2`, ...
    pub fn index_of(&self, name: &str) -> Option<(usize, GenKind)> {
        if let Some(i) = self.nilpotent.iter().position(|(n, _)| n == name) {
            return Some((i, GenKind::Nilpotent));
        }
        if let Some(i) = self.units.iter().position(|n| n == name) {
            return Some((self.unit_range().start + i, GenKind::Unit));
        }
        if let Some(i) = self.t_vars.iter().position(|(n, _)| n == name) {
            return Some((self.t_range().start + i, GenKind::T));
        }
        if is_newton_name(name) {
            let m: u32 = name[1..].parse().ok()?;
            if m >= 1 && m <= self.lambda.max_index {
                return Some((self.newton_range().start + m as usize - 1, GenKind::Newton));
            }
        }
        None
    }

    pub fn kind_at(&self, idx: usize) -> GenKind {
        if self.nil_range().contains(&idx) {
            GenKind::Nilpotent
        } else if self.unit_range().contains(&idx) {
            GenKind::Unit
        } else if self.newton_range().contains(&idx) {
            GenKind::Newton
        } else {
            GenKind::T
        }
    }

    pub fn name_at(&self, idx: usize) -> String {
        match self.kind_at(idx) {
            GenKind::Nilpotent => self.nilpotent[idx].0.clone(),
            GenKind::Unit => self.units[idx - self.unit_range().start].clone(),
            GenKind::Newton => format!("N{}", idx - self.newton_range().start + 1),
            GenKind::T => self.t_vars[idx - self.t_range().start].0.clone(),
        }
    }

    /// λ-weight of a monomial, `Σ m·c_m` over the Newton block.
    pub fn weight(&self, mono: &Monomial) -> i64 {
        self.newton_range()
            .enumerate()
            .map(|(j, idx)| (j as i64 + 1) * mono.0[idx] as i64)
            .sum()
    }

    /// `true` when the monomial survives every truncation of the ring.
    pub fn admits(&self, mono: &Monomial) -> bool {
        for (i, (_, order)) in self.nilpotent.iter().enumerate() {
            let e = mono.0[i];
            if e < 0 || e >= *order as i32 {
                return false;
            }
        }
        for idx in self.newton_range() {
            if mono.0[idx] < 0 {
                return false;
            }
        }
        if self.weight(mono) > self.lambda.weight_cutoff as i64 {
            return false;
        }
        let ts = self.t_range().start;
        for (j, (_, order)) in self.t_vars.iter().enumerate() {
            let e = mono.0[ts + j];
            if e < 0 || e >= *order as i32 {
                return false;
            }
        }
        true
    }

    /// Product of two monomials, or `None` if it is truncated to zero.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<Monomial> {
        let mut out = a.clone();
        for (x, y) in out.0.iter_mut().zip(b.0.iter()) {
            *x += *y;
        }
        self.admits(&out).then_some(out)
    }

    /// A monomial is nilpotent when any nilpotent, Newton or `t` exponent
    /// is positive; otherwise it is a unit-generator monomial.
    pub fn is_unit_monomial(&self, mono: &Monomial) -> bool {
        self.nil_range()
            .chain(self.newton_range())
            .chain(self.t_range())
            .all(|i| mono.0[i] == 0)
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }

    /// Bound on the nilpotency index of any element with zero constant part.
    pub(crate) fn nilpotency_bound(&self) -> usize {
        let nil: u32 = self.nilpotent.iter().map(|(_, o)| o - 1).sum();
        let t: u32 = self.t_vars.iter().map(|(_, o)| o - 1).sum();
        (nil + self.lambda.weight_cutoff + t) as usize + 1
    }
}

fn is_newton_name(name: &str) -> bool {
    name.len() > 1 && name.starts_with('N') && name[1..].chars().all(|c| c.is_ascii_digit())
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q")?;
        let mut gens: Vec<String> = Vec::new();
        for (n, o) in &self.nilpotent {
            gens.push(format!("{n} ({n}^{o}=0)"));
        }
        for u in &self.units {
            gens.push(format!("{u}^±"));
        }
        if self.lambda.max_index > 0 {
            gens.push(format!(
                "N1..N{} (weight ≤ {})",
                self.lambda.max_index, self.lambda.weight_cutoff
            ));
        }
        for (n, o) in &self.t_vars {
            gens.push(format!("{n} (mod {n}^{o})"));
        }
        if !gens.is_empty() {
            write!(f, "[{}]", gens.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Default)]
pub struct RingSpecBuilder {
    spec: RingSpec,
}

impl Default for RingSpec {
    fn default() -> Self {
        RingSpec {
            nilpotent: Vec::new(),
            units: Vec::new(),
            lambda: no_lambda(),
            t_vars: Vec::new(),
        }
    }
}

impl RingSpecBuilder {
    pub fn nilpotent(mut self, name: &str, order: u32) -> Self {
        self.spec.nilpotent.push((name.to_string(), order));
        self
    }

    pub fn unit(mut self, name: &str) -> Self {
        self.spec.units.push(name.to_string());
        self
    }

    pub fn lambda(mut self, max_index: u32, weight_cutoff: u32) -> Self {
        self.spec.lambda = LambdaCutoff {
            max_index,
            weight_cutoff,
        };
        self
    }

    pub fn t_var(mut self, name: &str, order: u32) -> Self {
        self.spec.t_vars.push((name.to_string(), order));
        self
    }

    pub fn build(self) -> Result<Arc<RingSpec>> {
        self.spec.validate()?;
        Ok(Arc::new(self.spec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_lookup() {
        let s = RingSpec::builder()
            .nilpotent("nu", 3)
            .unit("L")
            .lambda(4, 4)
            .t_var("tp", 2)
            .build()
            .unwrap();
        assert_eq!(s.len(), 1 + 1 + 4 + 1);
        assert_eq!(s.index_of("nu"), Some((0, GenKind::Nilpotent)));
        assert_eq!(s.index_of("L"), Some((1, GenKind::Unit)));
        assert_eq!(s.index_of("N3"), Some((4, GenKind::Newton)));
        assert_eq!(s.index_of("N5"), None);
        assert_eq!(s.index_of("tp"), Some((6, GenKind::T)));
        assert_eq!(s.name_at(4), "N3");
    }

    #[test]
    fn rejects_duplicates_and_reserved_names() {
        assert!(RingSpec::builder().unit("L").unit("L").build().is_err());
        assert!(RingSpec::builder().unit("N2").build().is_err());
        assert!(RingSpec::builder().nilpotent("nu", 0).build().is_err());
    }
}
