fn main() { std::process::exit(diskconf::cli::dispatch(std::env::args_os())); }
