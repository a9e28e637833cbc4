//! p-adic power-series dynamics, elliptic-curve arithmetic, newform
//! coefficient vectors and elliptic-surface scanning, with planar renderings
//! of p-adic orbits matched against sampled vector fields.

pub mod config;
pub mod elliptic;
pub mod field;
pub mod formation;
pub mod json;
pub mod modular;
pub mod padic;
pub mod planar;
pub mod series;
pub mod surface;
mod svg;
pub mod tfilter;

use thiserror::Error;

/// Any error raised by the library, tagged by the module that owns it.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Padic(#[from] padic::PadicError),
    #[error(transparent)]
    Series(#[from] series::SeriesError),
    #[error(transparent)]
    Tfilter(#[from] tfilter::TfilterError),
    #[error(transparent)]
    Elliptic(#[from] elliptic::EllipticError),
    #[error(transparent)]
    Modular(#[from] modular::ModularError),
    #[error(transparent)]
    Formation(#[from] formation::FormationError),
    #[error(transparent)]
    Surface(#[from] surface::SurfaceError),
    #[error(transparent)]
    Planar(#[from] planar::PlanarError),
    #[error(transparent)]
    Field(#[from] field::FieldError),
    #[error(transparent)]
    Config(#[from] config::ConfigError),
}

impl Error {
    /// The innermost variant name, e.g. `NotPrime` for a prime check that
    /// failed deep inside series evaluation.
    pub fn name(&self) -> String {
        let debug = match self {
            Error::Padic(e) => format!("{e:?}"),
            Error::Series(e) => format!("{e:?}"),
            Error::Tfilter(e) => format!("{e:?}"),
            Error::Elliptic(e) => format!("{e:?}"),
            Error::Modular(e) => format!("{e:?}"),
            Error::Formation(e) => format!("{e:?}"),
            Error::Surface(e) => format!("{e:?}"),
            Error::Planar(e) => format!("{e:?}"),
            Error::Field(e) => format!("{e:?}"),
            Error::Config(e) => format!("{e:?}"),
        };
        innermost_variant(&debug)
    }
}

/// Walks `Outer(Inner(..))` wrappers in a derived `Debug` string. Wrapped
/// errors are always tuple variants holding another enum, so descent stops
/// at the first payload that is not a capitalised identifier.
fn innermost_variant(debug: &str) -> String {
    let mut rest = debug;
    loop {
        let end = rest.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(rest.len());
        let ident = &rest[..end];
        let tail = &rest[end..];
        let inner = tail.strip_prefix('(').unwrap_or("");
        let starts_upper = inner.chars().next().is_some_and(char::is_uppercase);
        let opaque = ["Some", "None", "Kind", "Error", "Os", "Custom"]
            .iter()
            .any(|w| inner.starts_with(w));
        if starts_upper && !opaque {
            rest = inner;
        } else {
            return ident.to_string();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_descend_through_wrappers() {
        let e: Error = series::SeriesError::Padic(padic::PadicError::NotPrime(4)).into();
        assert_eq!(e.name(), "NotPrime");
        let e: Error = elliptic::EllipticError::BadReductionRequired(Some(2)).into();
        assert_eq!(e.name(), "BadReductionRequired");
        let e: Error = elliptic::EllipticError::Parse("x".into()).into();
        assert_eq!(e.name(), "Parse");
        let e: Error = field::FieldError::Io {
            path: "a".into(),
            source: std::io::Error::other("boom"),
        }
        .into();
        assert_eq!(e.name(), "Io");
    }
}
