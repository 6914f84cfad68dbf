fn main() { std::process::exit(corefactor::cli::main()) }
