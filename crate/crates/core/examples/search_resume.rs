//! A tiny search interrupted halfway and resumed from its checkpoint.
//!
//!     cargo run --release --example search_resume

use artin_core::search::{run_search, Checkpoint, GSource, SearchConfig, SearchControl, WideInt};

fn main() {
    let cfg = SearchConfig {
        degree: 2,
        coeff_ranges: vec![
            [WideInt(1), WideInt(41)],
            [WideInt(-3), WideInt(3)],
            [WideInt(1), WideInt(2)],
        ],
        g_source: GSource::List {
            values: vec![WideInt(2), WideInt(3), WideInt(5), WideInt(-3)],
        },
        quick_reject_threshold: 4,
        n_budget: 2000,
        sieve_bound: 1000,
        record_floor: 8,
        congruences: vec![],
    };
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("search.ckpt.json");
    let ctl = SearchControl {
        checkpoint_path: Some(path.clone()),
        checkpoint_every: 50,
        stop_after: Some(500),
        ..SearchControl::default()
    };

    let first = run_search(&cfg, None, &ctl, |_| {}).expect("first session");
    println!(
        "stopped at {} (completed: {}), best c so far {:?}",
        first.checkpoint.cursor,
        first.completed,
        first.checkpoint.leaderboard.first().map(|e| e.c)
    );

    let resumed = Checkpoint::load(&path).expect("checkpoint on disk");
    let ctl = SearchControl {
        stop_after: None,
        ..ctl
    };
    let done = run_search(&cfg, Some(resumed), &ctl, |_| {}).expect("second session");
    println!(
        "finished at {} of the space; stats {:?}",
        done.checkpoint.cursor, done.checkpoint.stats
    );
    for (rank, e) in done.checkpoint.leaderboard.iter().take(5).enumerate() {
        println!(
            "{:>2}. c = {:>3}  r = {:>3}  f = [{}]  g = {}  n in [{}, {}]",
            rank + 1,
            e.c,
            e.r,
            e.f,
            e.g,
            e.n_range.0,
            e.n_range.1
        );
    }
}
