use std::fmt::Display;

use serde::Serializer;

/// Serializes any integer as a decimal string so wide values survive JSON.
pub(crate) fn decimal<T: Display, S: Serializer>(value: &T, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}
