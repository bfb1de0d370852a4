//! Runs one of the five canned sweeps and writes it as CSV, then lists the
//! local maxima of each curve.
//!
//!     cargo run --release --example figure_sweep -- 1 fig1.csv

use rindler_purcell::cli::{sweep_csv, RunConfig};
use rindler_purcell::sweep::local_maxima;
use rindler_purcell::Figure;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let number: u8 = args.next().as_deref().unwrap_or("1").parse()?;
    let path = args.next().unwrap_or_else(|| format!("figure{number}.csv"));
    let figure = Figure::from_number(number).ok_or("figure must be 1 to 5")?;

    let config = RunConfig::from_figure(figure);
    let (csv, notes) = sweep_csv(&config)?;
    std::fs::write(&path, &csv)?;
    for n in notes {
        eprintln!("{n}");
    }
    println!("wrote {path}");

    let rows: Vec<Vec<f64>> = csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('a'))
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    let header = csv
        .lines()
        .find(|l| l.starts_with("a,"))
        .unwrap_or_default();
    let accels: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    for (c, name) in header.split(',').enumerate().skip(1) {
        let curve: Vec<f64> = rows.iter().map(|r| r[c]).collect();
        let maxima = local_maxima(&accels, &curve);
        println!("{name}: {} local maxima", maxima.len());
        for (a, p) in maxima.iter().take(6) {
            println!("  a = {a:.4}  P = {p:.4e}");
        }
    }
    Ok(())
}
