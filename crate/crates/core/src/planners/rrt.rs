use rand::Rng;

use super::{steer, Path, PlanError, PlanResult, PlannerConfig, Tree};
use crate::clock::Stopwatch;
use crate::gridworld::{GridMap, PlanningQuery};
use crate::sampling::Sampler;

/// Plain RRT: grow the tree until a new vertex lands in the goal disk or the
/// iteration budget runs out. An unsolved run is a result without a path,
/// not an error.
pub fn rrt_plan<S: Sampler, R: Rng + ?Sized>(
    map: &GridMap,
    query: &PlanningQuery,
    cfg: &PlannerConfig,
    sampler: &mut S,
    rng: &mut R,
) -> Result<PlanResult, PlanError> {
    cfg.validate()?;
    query.validate(map)?;
    let clock = Stopwatch::start();
    let mut tree = Tree::new(
        query.start,
        map.width() as f64,
        map.height() as f64,
        cfg.rewire_radius,
    );
    let mut found = query.in_goal(query.start).then_some(0);
    let mut iterations = 0;

    while found.is_none() && iterations < cfg.max_iterations {
        iterations += 1;
        let x_rand = sampler.sample(map, rng)?;
        let nearest = tree.nearest(x_rand);
        let x_nearest = tree.point(nearest);
        let x_new = steer(x_nearest, x_rand, cfg.step_size);
        if cfg.segment_free(map, x_nearest, x_new)? {
            let v = tree.add(x_new, nearest);
            if query.in_goal(x_new) {
                found = Some(v);
            }
        }
    }

    let path = found.map(|v| Path::new(tree.path_to(v)));
    Ok(PlanResult {
        nodes_at_first_solution: found.map(|_| tree.len()),
        initial_path: path.clone(),
        best_path: path,
        iterations_used: iterations,
        wall_time: clock.elapsed_secs(),
        tree,
    })
}
