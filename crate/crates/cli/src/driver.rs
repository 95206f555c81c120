//! Wall-clock-budgeted, optionally parallel front end over the library's
//! split/classify/merge search API. Completed runs are bit-identical no
//! matter how many workers ran them; only truncation points depend on time.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use wdrd_core::search::{
    classify_orientations_with, classify_subtree, split_prefixes, ClassificationReport,
    OrientationSearchConfig, SearchConfigError, SubtreeOutcome,
};

/// Shallowest split depth giving at least a few subtrees per worker, so the
/// work queue stays balanced without flooding memory with prefixes.
fn split_depth(edges: usize, jobs: usize) -> usize {
    let mut depth = 0;
    let mut leaves = 1usize;
    while depth < edges.min(10) && leaves < jobs * 8 {
        depth += 1;
        leaves *= 3;
    }
    depth
}

pub fn run_search(
    cfg: &OrientationSearchConfig,
    jobs: usize,
    deadline: Instant,
) -> Result<ClassificationReport, SearchConfigError> {
    let stop = move || Instant::now() >= deadline;
    if jobs <= 1 {
        return classify_orientations_with(cfg, Some(&stop));
    }

    let edges = cfg.base.arcs().len() / 2;
    let split = split_prefixes(cfg, split_depth(edges, jobs))?;
    let queue = AtomicUsize::new(0);
    let budget = AtomicU64::new(0);
    let outcomes: Mutex<Vec<SubtreeOutcome>> = Mutex::new(Vec::new());
    let first_error: Mutex<Option<SearchConfigError>> = Mutex::new(None);

    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let next = queue.fetch_add(1, Ordering::Relaxed);
                let Some(prefix) = split.prefixes.get(next) else {
                    return;
                };
                match classify_subtree(cfg, prefix, &budget, Some(&stop)) {
                    Ok(outcome) => outcomes.lock().unwrap().push(outcome),
                    Err(e) => {
                        first_error.lock().unwrap().get_or_insert(e);
                        return;
                    }
                }
            });
        }
    });

    if let Some(e) = first_error.into_inner().unwrap() {
        return Err(e);
    }
    wdrd_core::search::assemble_report(cfg, split.pruned, outcomes.into_inner().unwrap())
}
