#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rsp/solver.hpp"

namespace rsp::solver {

std::optional<BackendConfig> backend_from_env() {
  const char* cmd = std::getenv("RSP_BACKEND");
  if (cmd == nullptr || *cmd == '\0') return std::nullopt;
  return BackendConfig{cmd};
}

SolveResult solve_with_backend(const LinearModel& model, const std::optional<BackendConfig>& config,
                               const std::string& workdir) {
  if (!config.has_value() || config->command.empty()) throw SolverError("backend unavailable");

  std::filesystem::create_directories(workdir);
  const std::string lp_path = (std::filesystem::path(workdir) / "model.lp").string();
  const std::string sol_path = (std::filesystem::path(workdir) / "solution.txt").string();
  write_lp_file(model, lp_path);
  std::error_code ec;
  std::filesystem::remove(sol_path, ec);

  const std::string cmd = config->command + " " + lp_path + " " + sol_path;
  const int rc = std::system(cmd.c_str());
  if (rc != 0) throw SolverError("backend command failed with exit code " + std::to_string(rc));

  std::ifstream in(sol_path);
  if (!in) throw SolverError("backend produced no solution file");

  SolveResult res;
  res.values.assign(model.num_vars(), 0.0);
  bool saw_status = false;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key.empty() || key[0] == '#') continue;
    if (key == "status") {
      std::string word;
      ls >> word;
      if (word == "optimal") res.status = SolveStatus::optimal;
      else if (word == "infeasible") res.status = SolveStatus::infeasible;
      else if (word == "unbounded") res.status = SolveStatus::unbounded;
      else if (word == "limit") res.status = SolveStatus::limit;
      else throw SolverError("backend reported unknown status " + word);
      saw_status = true;
    } else if (key == "objective") {
      if (!(ls >> res.objective)) throw SolverError("backend objective line unreadable");
    } else if (key.size() > 1 && key[0] == 'x') {
      int j = -1;
      try {
        j = std::stoi(key.substr(1));
      } catch (const std::exception&) {
        throw SolverError("backend variable line unreadable: " + key);
      }
      double v = 0.0;
      if (j < 0 || j >= model.num_vars() || !(ls >> v))
        throw SolverError("backend variable line unreadable: " + key);
      res.values[j] = v;
    }
  }
  if (!saw_status) throw SolverError("backend solution file missing status");
  return res;
}

}  // namespace rsp::solver
