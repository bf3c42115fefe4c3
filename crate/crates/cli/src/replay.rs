use std::fs::File;
use std::io::{self, BufRead, BufReader};

use vigil_core::session::{run_replay, write_report};
use vigil_core::stream_io::read_labels;
use vigil_core::EventKind;

use crate::args::ReplayArgs;
use crate::error::CliError;

pub fn run(args: ReplayArgs) -> Result<(), CliError> {
    let config = args.config.resolve()?;

    let labels = match &args.labels {
        None => None,
        Some(path) => {
            let file = File::open(path).map_err(|e| CliError::open(path, e))?;
            Some(read_labels(BufReader::new(file)).map_err(|e| CliError::csv(path.display(), e))?)
        }
    };

    let (input, name): (Box<dyn BufRead>, String) = if args.input.as_os_str() == "-" {
        (Box::new(io::stdin().lock()), "stdin".into())
    } else {
        let file = File::open(&args.input).map_err(|e| CliError::open(&args.input, e))?;
        (
            Box::new(BufReader::new(file)),
            args.input.display().to_string(),
        )
    };
    let report =
        run_replay(input, config, labels.as_deref()).map_err(|e| CliError::session(&name, e))?;

    std::fs::create_dir_all(&args.out).map_err(|e| CliError::io(args.out.display(), e))?;
    let written =
        write_report(&report, &args.out).map_err(|e| CliError::io(args.out.display(), e))?;

    if !args.quiet {
        let s = &report.summary;
        println!("frames: {}", s.frames_seen);
        let counts: Vec<String> = EventKind::ALL
            .iter()
            .map(|&k| format!("{k}: {}", s.count(k)))
            .collect();
        println!("{}", counts.join(", "));
        if let Some(last) = report.accuracy_series.as_ref().and_then(|a| a.last()) {
            println!("final rolling accuracy: {:.4}", last.accuracy);
        }
        for path in written {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}
