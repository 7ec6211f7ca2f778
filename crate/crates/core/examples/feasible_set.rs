//! Size of the feasible allocation set under the all-2-bit power budget.

use adcalloc::allocation::total_power;
use adcalloc::{enumerate_bset, PowerModel};

fn main() -> anyhow::Result<()> {
    for n in [1, 2, 4, 8, 12] {
        let pm = PowerModel::unit(n);
        let set = enumerate_bset(n, &pm)?;
        let at_budget = set.iter().filter(|b| total_power(b, &pm) == pm.p_adc).count();
        println!("n = {n:>2}: {:>6} feasible, {:>6} spend the whole budget", set.len(), at_budget);
    }
    let pm = PowerModel::unit(2);
    let listed: Vec<String> = enumerate_bset(2, &pm)?.iter().map(ToString::to_string).collect();
    println!("n = 2: {}", listed.join(" "));
    Ok(())
}
