//! Universe and system construction from a TOML document.
//!
//! ```toml
//! kind = "example1"
//! [a]
//! kind = "factorial-blocks"
//! ```
//!
//! Other kinds: `example2`, `example3`, `shift` (with `weight`) and `line`
//! (with `coords` and an optional index `map`).

use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::gallery::{build_example, ExampleSystem};
use crate::proxsens::shift_system;
use crate::scalar::{int, Rational};

use super::density::{CustomList, DensityKind, DensitySet, DoublingBlocks, FactorialBlocks, Naturals, SquaredExponents};
use super::finite::FiniteUniverse;
use super::sequence::SequenceUniverse;
use super::System;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityConfig {
    pub kind: DensityKind,
    #[serde(default)]
    pub elements: Vec<u64>,
}

impl DensityConfig {
    pub fn build(&self) -> Result<Arc<dyn DensitySet>> {
        if self.kind != DensityKind::CustomList && !self.elements.is_empty() {
            return Err(Error::Config(format!("elements only apply to custom-list, not {:?}", self.kind)));
        }
        Ok(match self.kind {
            DensityKind::Naturals => Arc::new(Naturals),
            DensityKind::FactorialBlocks => Arc::new(FactorialBlocks),
            DensityKind::SquaredExponents => Arc::new(SquaredExponents),
            DensityKind::DoublingBlocks => Arc::new(DoublingBlocks),
            DensityKind::CustomList => Arc::new(CustomList::new(self.elements.clone())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum UniverseConfig {
    Example1 { a: Option<DensityConfig> },
    Example2 { a: Option<DensityConfig> },
    Example3 { a: Option<DensityConfig> },
    Shift {
        #[serde(with = "crate::scalar::rational_serde")]
        weight: Rational,
    },
    Line {
        #[serde(default = "default_line_name")]
        name: String,
        coords: Vec<RationalText>,
        map: Option<Vec<usize>>,
    },
}

fn default_line_name() -> String {
    "line".into()
}

/// A rational written as a string, integer or decimal.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct RationalText(#[serde(with = "crate::scalar::rational_serde")] pub Rational);

pub enum BuiltSystem {
    Example(ExampleSystem),
    Shift(System<SequenceUniverse>),
    Line(System<FiniteUniverse<Rational>>),
}

impl UniverseConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn build(&self) -> Result<BuiltSystem> {
        let example = |which: u8, a: &Option<DensityConfig>, default: DensityKind| -> Result<BuiltSystem> {
            let a = match a {
                Some(c) => c.build()?,
                None => DensityConfig { kind: default, elements: vec![] }.build()?,
            };
            build_example(which, a).map(BuiltSystem::Example)
        };
        match self {
            UniverseConfig::Example1 { a } => example(1, a, DensityKind::FactorialBlocks),
            UniverseConfig::Example2 { a } => example(2, a, DensityKind::SquaredExponents),
            UniverseConfig::Example3 { a } => example(3, a, DensityKind::DoublingBlocks),
            UniverseConfig::Shift { weight } => {
                if *weight <= int(1) {
                    return Err(Error::Config(format!("shift weight must exceed 1, got {weight}")));
                }
                Ok(BuiltSystem::Shift(shift_system(weight)))
            }
            UniverseConfig::Line { name, coords, map } => {
                let xs: Vec<Rational> = coords.iter().map(|c| c.0.clone()).collect();
                let u = Arc::new(FiniteUniverse::on_line(name.clone(), &xs)?);
                let Some(map) = map else {
                    return Ok(BuiltSystem::Line(System::identity(u)));
                };
                if map.len() != xs.len() || map.iter().any(|i| *i >= xs.len()) {
                    return Err(Error::Config(format!("map must send each of the {} points to a point", xs.len())));
                }
                let map = map.clone();
                Ok(BuiltSystem::Line(System::new(u, "table", move |p: &usize| map[*p])))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::spaces::sequence::ShiftVector;
    use crate::spaces::Universe;

    #[test]
    fn example_defaults_and_mismatch() {
        let c = UniverseConfig::from_toml("kind = \"example3\"").unwrap();
        assert!(matches!(c.build().unwrap(), BuiltSystem::Example(ExampleSystem::Three(_))));
        let c = UniverseConfig::from_toml("kind = \"example1\"\n[a]\nkind = \"doubling-blocks\"").unwrap();
        assert!(matches!(c.build(), Err(Error::Config(_))));
        let c = UniverseConfig::from_toml("kind = \"example2\"\n[a]\nkind = \"naturals\"\nelements = [3]").unwrap();
        assert!(matches!(c.build(), Err(Error::Config(_))));
    }

    #[test]
    fn shift_weight() {
        let c = UniverseConfig::from_toml("kind = \"shift\"\nweight = \"3/2\"").unwrap();
        assert_eq!(c, UniverseConfig::Shift { weight: rat(3, 2) });
        let BuiltSystem::Shift(s) = c.build().unwrap() else { panic!() };
        assert_eq!(s.apply(&ShiftVector::unit(1)), ShiftVector::unit(0).scaled(&rat(3, 2)));
        let c = UniverseConfig::from_toml("kind = \"shift\"\nweight = 1").unwrap();
        assert!(matches!(c.build(), Err(Error::Config(_))));
    }

    #[test]
    fn line_with_a_map() {
        let c = UniverseConfig::from_toml("kind = \"line\"\ncoords = [0, \"1/2\", 2.5]\nmap = [1, 2, 0]").unwrap();
        let BuiltSystem::Line(s) = c.build().unwrap() else { panic!() };
        assert_eq!(s.iterate(&0, 4), 1);
        assert_eq!(s.universe().metric(&0, &2), rat(5, 2));
        let c = UniverseConfig::from_toml("kind = \"line\"\ncoords = [0, 1]\nmap = [3, 0]").unwrap();
        assert!(c.build().is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(UniverseConfig::from_toml("kind = \"shift\"\nweight = 2\ncolour = 1").is_err());
        assert!(UniverseConfig::from_toml("kind = \"torus\"").is_err());
    }
}
