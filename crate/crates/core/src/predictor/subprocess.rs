use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use super::wire::{Request, Response};
use super::{Answer, Predictor, Query};
use crate::error::{Error, Result};

/// A predictor process spoken to over its standard input and output.
///
/// Requests in a batch are all written before responses are collected; responses may
/// arrive in any order and are matched back by id.
pub struct SubprocessPredictor {
    command: String,
    child: Child,
    stdin: Option<ChildStdin>,
    stdout: BufReader<ChildStdout>,
    next_id: u64,
}

impl SubprocessPredictor {
    /// Starts `command` through `sh -c`.
    pub fn spawn(command: &str) -> Result<Self> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| Error::Predictor {
                id: None,
                message: format!("cannot start `{command}`: {e}"),
            })?;
        let stdin = child.stdin.take();
        let stdout = BufReader::new(child.stdout.take().expect("stdout is piped"));
        Ok(SubprocessPredictor {
            command: command.to_string(),
            child,
            stdin,
            stdout,
            next_id: 1,
        })
    }

    fn transport(&self, message: String) -> Error {
        Error::Predictor {
            id: None,
            message: format!("`{}`: {message}", self.command),
        }
    }
}

impl Predictor for SubprocessPredictor {
    fn answer(&mut self, queries: &[Query]) -> Result<Vec<Answer>> {
        if queries.is_empty() {
            return Ok(Vec::new());
        }
        let first_id = self.next_id;
        self.next_id += queries.len() as u64;
        let requests: Vec<Request> = queries
            .iter()
            .enumerate()
            .map(|(i, q)| Request {
                id: first_id + i as u64,
                query: q.clone(),
            })
            .collect();

        let Some(stdin) = self.stdin.as_mut() else {
            return Err(self.transport("input stream already closed".into()));
        };
        let stdout = &mut self.stdout;
        let mut pending: HashMap<u64, Response> = HashMap::with_capacity(queries.len());

        // Writing and reading run concurrently so a predictor that answers as it reads
        // cannot deadlock on full pipes.
        let (write_result, read_result) = std::thread::scope(|scope| {
            let writer = scope.spawn(move || -> std::io::Result<()> {
                let mut buf = std::io::BufWriter::new(stdin);
                for req in &requests {
                    writeln!(buf, "{}", req.to_line())?;
                }
                buf.flush()
            });
            let mut line = String::new();
            let read = loop {
                if pending.len() == queries.len() {
                    break Ok(());
                }
                line.clear();
                match stdout.read_line(&mut line) {
                    Ok(0) => break Err("predictor closed its output".to_string()),
                    Ok(_) => {}
                    Err(e) => break Err(format!("read failed: {e}")),
                }
                if line.trim().is_empty() {
                    continue;
                }
                let resp = match Response::parse(line.trim_end()) {
                    Ok(r) => r,
                    Err(e) => break Err(e.to_string()),
                };
                match resp.id {
                    Some(id) if (first_id..first_id + queries.len() as u64).contains(&id) => {
                        pending.insert(id, resp);
                    }
                    Some(id) => log::warn!("ignoring response for unknown request id {id}"),
                    None => {
                        break Err(format!(
                            "predictor rejected a request: {}",
                            resp.error.unwrap_or_default()
                        ))
                    }
                }
            };
            let written = writer.join().unwrap_or_else(|_| Err(std::io::Error::other("writer panicked")));
            (written, read)
        });
        read_result.map_err(|m| self.transport(m))?;
        write_result.map_err(|e| self.transport(format!("write failed: {e}")))?;

        queries
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let resp = pending.remove(&(first_id + i as u64)).expect("all ids collected");
                resp.into_answer(q)
            })
            .collect()
    }
}

impl Drop for SubprocessPredictor {
    fn drop(&mut self) {
        // closing stdin lets well-behaved predictors exit on their own
        drop(self.stdin.take());
        match self.child.try_wait() {
            Ok(Some(_)) => {}
            _ => {
                std::thread::sleep(std::time::Duration::from_millis(50));
                if !matches!(self.child.try_wait(), Ok(Some(_))) {
                    let _ = self.child.kill();
                }
                let _ = self.child.wait();
            }
        }
    }
}
