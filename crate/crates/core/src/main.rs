use std::process::ExitCode;

fn main() -> ExitCode {
    let res = sphere_comb::cli::run(std::env::args_os());
    if let Some(path) = &res.output {
        let text = serde_json::to_string_pretty(&res.payload).expect("serialisable payload");
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let out = res.render();
    if res.exit_code() == 2 && !res.json {
        eprintln!("{}", out.trim_end());
    } else {
        println!("{}", out.trim_end());
    }
    ExitCode::from(res.exit_code() as u8)
}
