//! Run artifacts and their round-trip: a traced solver run written as
//! `result.json` + `trace.csv`, read back, and summarized per event type.
//!
//! The trace CSV records one row per event — the initial state, every
//! descent step, every accepted perturbation hop, and the terminal state —
//! with reals at 17 significant digits so parsing the file reproduces the
//! run bit-for-bit.
//!
//! Run with: `cargo run --example trace_export`

use std::fs;
use std::io::BufReader;

use spgd::bench::fixture;
use spgd::optim::{self, Algorithm};
use spgd::trace::{read_trace_csv, Event};
use spgd::{presets, Error};

fn main() -> spgd::Result<()> {
    let function = "peaks";
    let fx = fixture(function)?;
    let cfg = presets::reference(function)?.config(Algorithm::Spgd);
    let result = optim::run(&cfg, fx.objective.as_ref(), &fx.x0, None, true)?;

    let dir = std::env::temp_dir().join("spgd_trace_export");
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let result_path = dir.join("result.json");
    let json = serde_json::to_string_pretty(&result).expect("result serializes");
    fs::write(&result_path, json + "\n").map_err(|e| Error::io(&result_path, e))?;
    let trace_path = dir.join("trace.csv");
    let csv = result.trace_csv_string().expect("trace recording was on");
    fs::write(&trace_path, &csv).map_err(|e| Error::io(&trace_path, e))?;
    println!(
        "wrote {} and {}",
        result_path.display(),
        trace_path.display()
    );

    // Read the CSV back and tally it.
    let file = fs::File::open(&trace_path).map_err(|e| Error::io(&trace_path, e))?;
    let steps = read_trace_csv(BufReader::new(file))?;
    println!("\n{} rows for {function} {}:", steps.len(), Algorithm::Spgd);
    for event in [
        Event::Init,
        Event::GdStep,
        Event::PerturbAccepted,
        Event::PerturbRejected,
        Event::Terminated,
    ] {
        let count = steps.iter().filter(|s| s.event == event).count();
        println!("  {:<16} {count:>6}", event.as_str());
    }

    let hops: Vec<&_> = steps
        .iter()
        .filter(|s| s.event == Event::PerturbAccepted)
        .collect();
    if let (Some(first), Some(last)) = (hops.first(), hops.last()) {
        println!(
            "\nfirst hop at iter {} (f {:.6}), last at iter {} (f {:.6})",
            first.iter, first.f, last.iter, last.f
        );
    }
    let best_row = steps
        .iter()
        .min_by(|a, b| a.f.total_cmp(&b.f))
        .expect("trace has rows");
    println!(
        "best f in trace {:.12} at iter {}",
        best_row.f, best_row.iter
    );
    assert_eq!(best_row.f, result.best_f, "summary and trace agree exactly");
    println!("(equals result.json best_f bit-for-bit)");
    Ok(())
}
