//! Regenerates both error tables and writes them as CSV to the system
//! temp directory as `table3.csv` and `table4.csv`.

use std::fs::File;

use eds3::bench::{run_table, write_csv};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for id in [3, 4] {
        let records = run_table(id)?;
        let path = std::env::temp_dir().join(format!("table{id}.csv"));
        write_csv(File::create(&path)?, &records)?;
        let worst_exact = records
            .iter()
            .filter(|r| r.method.is_exact())
            .map(|r| r.error)
            .fold(0.0, f64::max);
        println!("table {id}: {} cells -> {}", records.len(), path.display());
        println!("  largest exact-scheme error {worst_exact:.2e}");
        for r in records
            .iter()
            .filter(|r| r.t_end == records[0].t_end && r.h == records[0].h)
        {
            println!(
                "  {:<12} T={} h={} error {:.4e}",
                r.method.name(),
                r.t_end,
                r.h,
                r.error
            );
        }
    }
    Ok(())
}
