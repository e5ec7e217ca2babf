#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use fhaci_core::cpfsk::{RateThresholdTable, TableSpec};

/// The default rate table, built once and cached under the cargo target
/// directory so later test binaries can load it.
pub fn table() -> &'static RateThresholdTable {
    static TABLE: OnceLock<RateThresholdTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let spec = TableSpec::default();
        let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
            .join(format!("rate_table_{}_{}.json", spec.seed, spec.trials));
        if let Ok(t) = RateThresholdTable::load(&path) {
            if *t.spec() == spec {
                return t;
            }
        }
        let t = RateThresholdTable::build(&spec).expect("table build");
        let tmp = path.with_extension(format!("{}.tmp", std::process::id()));
        t.save(&tmp).expect("write table");
        std::fs::rename(&tmp, &path).expect("move table");
        t
    })
}
