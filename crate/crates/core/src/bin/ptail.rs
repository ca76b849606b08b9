fn main() {
    std::process::exit(pareto_tail::cli::main());
}
