fn main() {
    std::process::exit(heatmap_rrt::cli::run(std::env::args_os()));
}
