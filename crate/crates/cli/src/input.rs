use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde_json::Value;

use wgdbl_core::bicat::{validate_bicategory, Bicategory, BicategoryPresentation};
use wgdbl_core::dblcat::{DoubleCategory, DoublePresentation};
use wgdbl_core::fincat::FinCategory;
use wgdbl_core::fractions::{FractionsInput, FractionsPresentation};

use crate::{bundled_fixtures, CliError};

/// An input file: the name it was given by, its text and parsed JSON.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub display: String,
    pub text: String,
    pub value: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kind {
    Category,
    Double,
    Bicategory,
}

fn candidates(p: &Path) -> Vec<PathBuf> {
    let mut out = vec![p.to_path_buf()];
    if p.is_relative() {
        if let Some(dir) = std::env::var_os("WGDBL_FIXTURES") {
            out.push(Path::new(&dir).join(p));
        }
        out.push(bundled_fixtures().join(p));
    }
    let with_ext: Vec<PathBuf> = out.iter().filter(|c| c.extension().is_none()).map(|c| c.with_extension("json")).collect();
    out.extend(with_ext);
    out
}

/// Finds and parses an input file.
pub fn resolve_input(p: &Path) -> Result<Loaded, CliError> {
    let display = p.display().to_string();
    let path = candidates(p)
        .into_iter()
        .find(|c| c.is_file())
        .ok_or_else(|| CliError::Io { path: display.clone(), message: "no such file".into() })?;
    let text =
        std::fs::read_to_string(&path).map_err(|e| CliError::Io { path: display.clone(), message: e.to_string() })?;
    let value = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: display.clone(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(Loaded { display, text, value })
}

impl Loaded {
    pub(crate) fn kind(&self) -> Kind {
        if self.value.get("X0").is_some() {
            Kind::Double
        } else if self.value.get("one_cells").is_some() {
            Kind::Bicategory
        } else {
            Kind::Category
        }
    }

    fn parse<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        serde_json::from_str(&self.text).map_err(|e| CliError::Parse {
            path: self.display.clone(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    fn expect(&self, kind: Kind, what: &str) -> Result<(), CliError> {
        if self.kind() == kind {
            Ok(())
        } else {
            Err(CliError::Input(format!("{}: expected {what}", self.display)))
        }
    }

    pub(crate) fn category_input(&self) -> Result<FractionsInput, CliError> {
        self.expect(Kind::Category, "a category presentation")?;
        self.parse()
    }

    pub(crate) fn category(&self) -> Result<FinCategory, CliError> {
        FinCategory::from_presentation(&self.category_input()?.category)
            .map_err(|e| CliError::Input(format!("{}: {e}", self.display)))
    }

    /// The marked category. Without a `"W"` key, `W` is the identities.
    pub(crate) fn fractions(&self) -> Result<FractionsPresentation, CliError> {
        let input = self.category_input()?;
        let err = |e: &dyn std::fmt::Display| CliError::Input(format!("{}: {e}", self.display));
        if self.value.get("W").is_none() {
            let base = FinCategory::from_presentation(&input.category).map_err(|e| err(&e))?;
            return Ok(FractionsPresentation::identities(Arc::new(base)));
        }
        FractionsPresentation::from_input(&input).map_err(|e| err(&e))
    }

    pub(crate) fn double_presentation(&self) -> Result<DoublePresentation, CliError> {
        self.expect(Kind::Double, "a double-category presentation")?;
        self.parse()
    }

    pub(crate) fn bicategory_presentation(&self) -> Result<BicategoryPresentation, CliError> {
        self.expect(Kind::Bicategory, "a bicategory presentation")?;
        self.parse()
    }

    /// A bicategory presentation, or a category read as a locally discrete
    /// bicategory.
    pub(crate) fn bicategory(&self) -> Result<Bicategory, CliError> {
        match self.kind() {
            Kind::Bicategory => validate_bicategory(&self.bicategory_presentation()?)
                .map_err(|e| CliError::Input(format!("{}: {e}", self.display))),
            _ => Ok(Bicategory::locally_discrete(&self.category()?)),
        }
    }
}

/// A double category from a double-category presentation, or from a
/// (marked) category through the double category of fractions.
pub(crate) fn double(l: &Loaded) -> Result<DoubleCategory, CliError> {
    match l.kind() {
        Kind::Double => DoubleCategory::from_presentation(&l.double_presentation()?)
            .map_err(|e| CliError::Input(format!("{}: {e}", l.display))),
        Kind::Category => wgdbl_core::fractions::build_fractions(&l.fractions()?)
            .map(|f| Arc::unwrap_or_clone(f.double))
            .map_err(|e| CliError::Input(format!("{}: {e}", l.display))),
        Kind::Bicategory => Err(CliError::Input(format!("{}: expected a double category or a category", l.display))),
    }
}
