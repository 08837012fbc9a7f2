//! Trotter error against exact evolution for a small Hubbard lattice.

use fermisim::apps::{build_hubbard, filling_sector, log_log_slope, trotter_error_experiment, HubbardSpec};

fn main() -> fermisim::Result<()> {
    let spec = HubbardSpec { nx: 2, ny: 2, t_hop: 1.0, u_int: 8.0, periodic_x: true };
    let ham = build_hubbard(&spec)?;
    let shape = filling_sector(spec.norb(), 0.25)?;
    let steps = [4, 8, 16, 32];
    let records = trotter_error_experiment(&ham, shape, 1.0, &[0, 1, 2], &steps, 3, 0)?;
    for r in &records {
        println!("order {} steps {:2}: gates {:5}, error {:.3e}", r.order, r.n_steps, r.gate_count, r.mean_error);
    }
    for order in 0..3 {
        let pts: Vec<(usize, f64)> = records.iter().filter(|r| r.order == order).map(|r| (r.n_steps, r.mean_error)).collect();
        println!("order {order}: slope {:.2}", log_log_slope(&pts));
    }
    Ok(())
}
