//! The output envelope. Everything written here is a pure function of the
//! run configuration: no timestamps, no timings, no host details.

use serde::Serialize;

use crate::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Caveat {
    pub code: &'static str,
    pub message: String,
}

impl Caveat {
    pub fn new(code: &'static str, message: impl Into<String>) -> Self {
        Caveat { code, message: message.into() }
    }
}

/// Flat rows for the CSV form; columns are fixed per subcommand.
#[derive(Clone, Debug)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Output {
    pub result: serde_json::Value,
    pub table: Option<Table>,
    pub caveats: Vec<Caveat>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: u32,
    tool: &'static str,
    tool_version: &'static str,
    run_config: &'a RunConfig,
    result: &'a serde_json::Value,
    caveats: &'a [Caveat],
}

pub fn to_json(cfg: &RunConfig, out: &Output) -> String {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        tool: "duc",
        tool_version: env!("CARGO_PKG_VERSION"),
        run_config: cfg,
        result: &out.result,
        caveats: &out.caveats,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
    s.push('\n');
    s
}

/// Comment lines carry the schema version, the run configuration and the
/// caveats; then a header row and the data.
pub fn to_csv(cfg: &RunConfig, out: &Output, table: &Table) -> String {
    let mut s = format!("# duc schema_version={SCHEMA_VERSION} subcommand={}\n", cfg.command.name());
    s.push_str(&format!("# run_config={}\n", serde_json::to_string(cfg).expect("config serializes")));
    for c in &out.caveats {
        s.push_str(&format!("# caveat {}: {}\n", c.code, c.message));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns).expect("in-memory write");
    for r in &table.rows {
        w.write_record(r).expect("in-memory write");
    }
    s.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf-8"));
    s
}
