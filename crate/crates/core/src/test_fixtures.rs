//! Small datasets shared by unit and integration tests.

use crate::dataset::{load_csv_from_reader, Dataset, LoadOptions};

/// The four-row fixture:
///
/// ```text
/// x1,x2,y
/// a,1.0,1
/// a,3.0,1
/// b,2.0,-1
/// b,4.0,-1
/// ```
pub const FIXTURE_CSV: &str = "x1,x2,y\na,1.0,1\na,3.0,1\nb,2.0,-1\nb,4.0,-1\n";

pub fn fixture() -> Dataset {
    load_csv_from_reader(FIXTURE_CSV.as_bytes(), &LoadOptions::default()).expect("fixture parses")
}
