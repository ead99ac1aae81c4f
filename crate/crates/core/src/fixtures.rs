//! The two worked three-variable systems used throughout the docs and tests.

use crate::model::{parse_system, RecurrenceSystem};

/// Integer system with equal row sums whose middle row is the average of the
/// outer rows.
pub const SYSTEM_32: &str = "\
a[x] = 2*a[x-1] + 4*b[x-1] + 1
b[x] = a[x-1] + 3*b[x-1] + 2*c[x-1] + 1
c[x] = 2*b[x-1] + 4*c[x-1] + 1
init: a = 0, b = 0, c = 0
";

/// Fractional system where `b = 13/19·a + 6/19·c` holds only because of the
/// chosen initial values.
pub const SYSTEM_33: &str = "\
a[x] = 37/6*a[x-1] - 1/6*b[x-1] + 2
b[x] = 15/2*a[x-1] - 7/2*b[x-1] + 2*c[x-1] + 2
c[x] = 16/3*a[x-1] - 10/3*b[x-1] + 4*c[x-1] + 2
init: a = 41, b = 47, c = 60
";

pub fn system_32() -> RecurrenceSystem {
    parse_system(SYSTEM_32).expect("fixture parses")
}

pub fn system_33() -> RecurrenceSystem {
    parse_system(SYSTEM_33).expect("fixture parses")
}
