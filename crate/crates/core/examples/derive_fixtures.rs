//! Re-run the searches behind the frozen generator fixtures.
//!
//! `cargo run --example derive_fixtures -- [triple|gap] [seed] [budget]`

use monoseq::generators::{find_gap_sensitive, search_nonrealizable_triple};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let kind = args.first().map(String::as_str).unwrap_or("triple");
    let seed: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    match kind {
        "triple" => {
            let budget = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(20);
            let triple = search_nonrealizable_triple(9, seed, budget).expect("search runs");
            println!("{}", serde_json::to_string(&triple).unwrap());
        }
        _ => {
            let budget = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(20000);
            let gap = find_gap_sensitive(budget, seed).expect("search runs");
            println!("{}", serde_json::to_string(&gap).unwrap());
        }
    }
}
