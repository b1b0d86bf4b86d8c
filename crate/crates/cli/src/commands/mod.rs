pub mod derive;
pub mod evolve;
pub mod fig;
pub mod mc;
pub mod spectrum;
pub mod stats;
pub mod sweep;

use dce_core::Error;

use crate::error::Result;

/// Turns errors that only mean "not defined here" into `None`.
pub(crate) fn optional<T>(r: dce_core::Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::MarginalStability { .. } | Error::NoSqueezingWindow { .. } | Error::ZeroPopulation(_) | Error::NoHalfCrossing { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}
