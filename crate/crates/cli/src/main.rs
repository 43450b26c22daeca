use std::io;

fn main() {
    if let Ok(v) = std::env::var("GUL_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error[usage]: GUL_THREADS must be a positive integer, got `{v}`");
                std::process::exit(2);
            }
        }
    }
    let code = gul_cli::run(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
