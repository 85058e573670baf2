use rand::Rng;

use super::{
    distribution_for, guided_sampler, steer, Path, PlanError, PlanResult, PlannerConfig, Tree,
};
use crate::clock::Stopwatch;
use crate::gridworld::{GridMap, PlanningQuery};
use crate::sampling::{Heatmap, Sampler, SamplerConfig};

/// State exposed to an observer after every iteration.
pub struct IterationView<'a> {
    pub iteration: usize,
    pub tree: &'a Tree,
    /// Cost of the cheapest goal vertex so far.
    pub best_length: Option<f64>,
}

/// RRT* with choose-parent and rewiring inside a fixed radius.
///
/// Runs the full iteration budget. `initial_path` is the first goal-reaching
/// path, `best_path` the cheapest one at exit.
pub fn rrt_star_plan<S: Sampler, R: Rng + ?Sized>(
    map: &GridMap,
    query: &PlanningQuery,
    cfg: &PlannerConfig,
    sampler: &mut S,
    rng: &mut R,
) -> Result<PlanResult, PlanError> {
    rrt_star_plan_observed(map, query, cfg, sampler, rng, |_| {})
}

/// Heatmap-guided RRT*: each iteration flips a coin between the heatmap
/// distribution and uniform free-space sampling, then proceeds as RRT*.
pub fn cgan_rrt_star_plan<R: Rng + ?Sized>(
    map: &GridMap,
    query: &PlanningQuery,
    cfg: &PlannerConfig,
    sampler_cfg: &SamplerConfig,
    heatmap: &Heatmap,
    rng: &mut R,
) -> Result<PlanResult, PlanError> {
    let clock = Stopwatch::start();
    let dist = distribution_for(heatmap, map)?;
    let mut sampler = guided_sampler(&dist, sampler_cfg)?;
    let mut result = rrt_star_plan(map, query, cfg, &mut sampler, rng)?;
    result.wall_time = clock.elapsed_secs();
    Ok(result)
}

/// [`rrt_star_plan`] with a callback after every iteration.
pub fn rrt_star_plan_observed<S, R, F>(
    map: &GridMap,
    query: &PlanningQuery,
    cfg: &PlannerConfig,
    sampler: &mut S,
    rng: &mut R,
    mut observe: F,
) -> Result<PlanResult, PlanError>
where
    S: Sampler,
    R: Rng + ?Sized,
    F: FnMut(&IterationView<'_>),
{
    cfg.validate()?;
    query.validate(map)?;
    let clock = Stopwatch::start();
    let mut tree = Tree::new(
        query.start,
        map.width() as f64,
        map.height() as f64,
        cfg.rewire_radius,
    );
    let mut goal_vertices = Vec::new();
    let mut initial_path = None;
    let mut nodes_at_first_solution = None;
    if query.in_goal(query.start) {
        goal_vertices.push(0);
        initial_path = Some(Path::new(vec![query.start]));
        nodes_at_first_solution = Some(1);
    }
    let mut candidates: Vec<(f64, usize)> = Vec::new();

    for iteration in 1..=cfg.max_iterations {
        let x_rand = sampler.sample(map, rng)?;
        let nearest = tree.nearest(x_rand);
        let x_nearest = tree.point(nearest);
        let x_new = steer(x_nearest, x_rand, cfg.step_size);

        if cfg.segment_free(map, x_nearest, x_new)? {
            let neighbors = tree.near(x_new, cfg.rewire_radius);

            // Choose parent: cheapest collision-free candidate, lowest index on ties.
            candidates.clear();
            candidates.extend(
                neighbors
                    .iter()
                    .copied()
                    .chain((!neighbors.contains(&nearest)).then_some(nearest))
                    .map(|c| (tree.cost(c) + tree.point(c).distance(x_new), c)),
            );
            candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut parent = nearest;
            for &(_, c) in &candidates {
                if c == nearest
                    || cfg.segment_free(map, tree.point(c), x_new)?
                {
                    parent = c;
                    break;
                }
            }
            let new = tree.add(x_new, parent);

            // Rewire neighbors through the new vertex when strictly cheaper.
            for &u in &neighbors {
                if u == parent {
                    continue;
                }
                let via_new = tree.cost(new) + x_new.distance(tree.point(u));
                if via_new < tree.cost(u)
                    && cfg.segment_free(map, x_new, tree.point(u))?
                {
                    tree.reparent(u, new);
                }
            }

            if query.in_goal(x_new) {
                goal_vertices.push(new);
                if initial_path.is_none() {
                    initial_path = Some(Path::new(tree.path_to(new)));
                    nodes_at_first_solution = Some(tree.len());
                }
            }
        }

        let best_length = best_goal_vertex(&tree, &goal_vertices).map(|v| tree.cost(v));
        observe(&IterationView {
            iteration,
            tree: &tree,
            best_length,
        });
    }

    let best_path = best_goal_vertex(&tree, &goal_vertices).map(|v| Path::new(tree.path_to(v)));
    Ok(PlanResult {
        tree,
        initial_path,
        best_path,
        iterations_used: cfg.max_iterations,
        nodes_at_first_solution,
        wall_time: clock.elapsed_secs(),
    })
}

fn best_goal_vertex(tree: &Tree, goal_vertices: &[usize]) -> Option<usize> {
    goal_vertices
        .iter()
        .copied()
        .min_by(|&a, &b| tree.cost(a).total_cmp(&tree.cost(b)).then(a.cmp(&b)))
}
