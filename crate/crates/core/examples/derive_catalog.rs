use std::time::Instant;

use rule110_core::search::{derive_catalog, DEFAULT_MAX_PERIOD, DEFAULT_MAX_WIDTH};

fn main() {
    let t = Instant::now();
    let c = derive_catalog(DEFAULT_MAX_WIDTH, DEFAULT_MAX_PERIOD).expect("search");
    eprintln!("{} gliders in {:.1?}", c.len(), t.elapsed());
    print!("{}", c.to_text());
}
