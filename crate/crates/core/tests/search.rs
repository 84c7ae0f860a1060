//! Search determinism: resumed sessions reproduce the uninterrupted result.

use artin_core::search::{
    enumerate_candidates, run_search, Checkpoint, GSource, SearchConfig, SearchControl,
    SearchError, WideInt,
};

fn tiny_config() -> SearchConfig {
    SearchConfig {
        degree: 2,
        coeff_ranges: vec![
            [WideInt(1), WideInt(21)],
            [WideInt(-2), WideInt(2)],
            [WideInt(1), WideInt(2)],
        ],
        g_source: GSource::Range {
            start: WideInt(2),
            end: WideInt(7),
        },
        quick_reject_threshold: 3,
        n_budget: 640,
        sieve_bound: 100,
        record_floor: 5,
        congruences: vec![],
    }
}

#[test]
fn thread_count_does_not_change_the_board() {
    let cfg = tiny_config();
    let one = run_search(&cfg, None, &SearchControl::default(), |_| {}).unwrap();
    let four = run_search(
        &cfg,
        None,
        &SearchControl {
            threads: 4,
            ..SearchControl::default()
        },
        |_| {},
    )
    .unwrap();
    assert!(one.completed);
    assert_eq!(one.checkpoint, four.checkpoint);
    assert!(!one.checkpoint.leaderboard.is_empty());
}

#[test]
fn every_stop_point_resumes_to_the_same_board() {
    let cfg = tiny_config();
    let total = enumerate_candidates(&cfg, 0).unwrap().total();
    let reference = run_search(&cfg, None, &SearchControl::default(), |_| {}).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for stop in [1, 7, 100, 333, total - 1] {
        let path = dir.path().join(format!("stop{stop}.json"));
        let ctl = SearchControl {
            checkpoint_path: Some(path.clone()),
            checkpoint_every: 10,
            stop_after: Some(stop),
            ..SearchControl::default()
        };
        let first = run_search(&cfg, None, &ctl, |_| {}).unwrap();
        assert!(!first.completed);
        assert_eq!(first.checkpoint.cursor, stop);
        let on_disk = Checkpoint::load(&path).unwrap();
        assert_eq!(on_disk, first.checkpoint);
        let resumed = run_search(
            &cfg,
            Some(on_disk),
            &SearchControl {
                stop_after: None,
                threads: 3,
                ..ctl
            },
            |_| {},
        )
        .unwrap();
        assert!(resumed.completed);
        assert_eq!(resumed.checkpoint, reference.checkpoint, "stop at {stop}");
    }
}

#[test]
fn resume_refuses_a_different_config() {
    let cfg = tiny_config();
    let ctl = SearchControl {
        stop_after: Some(5),
        ..SearchControl::default()
    };
    let partial = run_search(&cfg, None, &ctl, |_| {}).unwrap();
    let mut other = cfg.clone();
    other.n_budget += 64;
    let err = run_search(&other, Some(partial.checkpoint), &ctl, |_| {}).unwrap_err();
    assert!(matches!(err, SearchError::FingerprintMismatch { .. }));
}

#[test]
fn record_instance_heads_the_board() {
    let cfg: SearchConfig = toml::from_str(
        r#"
degree = 2
coeff_ranges = [["182215381147285848449", "182215381147285848449"], [39721664, 39721664], [32, 32]]
quick_reject_threshold = 100
n_budget = 1200000

[g_source]
kind = "list"
values = ["593856338459898", 2, 3]
"#,
    )
    .unwrap();
    let out = run_search(&cfg, None, &SearchControl::default(), |_| {}).unwrap();
    let best = out.checkpoint.leaderboard.first().expect("an entry");
    assert_eq!(best.c, 38639);
    assert_eq!(best.g.value(), 593856338459898);
    // scanned up to and including the failure at X = 1749284 - 620651
    assert_eq!(best.n_range, (0, 1128634));
    assert_eq!(best.r, 38639);
}
