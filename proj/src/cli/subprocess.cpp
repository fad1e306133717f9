#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "qda/cli.hpp"
#include "qda/errors.hpp"

namespace qda::cli {
namespace {

class Child {
 public:
  explicit Child(std::string command) : command_(std::move(command)) {}
  Child(const Child&) = delete;
  Child& operator=(const Child&) = delete;

  ~Child() {
    if (to_) std::fclose(to_);
    if (from_) std::fclose(from_);
    if (pid_ > 0) waitpid(pid_, nullptr, 0);
  }

  double evaluate(std::span<const double> x) {
    std::lock_guard lock(mu_);
    if (!to_) spawn();
    std::ostringstream line;
    line.precision(17);
    for (std::size_t i = 0; i < x.size(); ++i) line << (i ? " " : "") << x[i];
    line << '\n';
    const std::string out = line.str();
    if (std::fputs(out.c_str(), to_) == EOF || std::fflush(to_) == EOF) fail("could not write to the target process");
    char buf[256];
    if (!std::fgets(buf, sizeof buf, from_)) fail("target process closed its output");
    char* end = nullptr;
    const double v = std::strtod(buf, &end);
    if (end == buf) fail(std::string("target process replied '") + buf + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw TargetEvaluationError("subprocess target `" + command_ + "`: " + what);
  }

  void spawn() {
    std::signal(SIGPIPE, SIG_IGN);
    int in[2];
    int out[2];
    if (pipe(in) != 0 || pipe(out) != 0) fail("pipe() failed");
    pid_ = fork();
    if (pid_ < 0) fail("fork() failed");
    if (pid_ == 0) {
      dup2(in[0], STDIN_FILENO);
      dup2(out[1], STDOUT_FILENO);
      close(in[0]);
      close(in[1]);
      close(out[0]);
      close(out[1]);
      execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    close(in[0]);
    close(out[1]);
    to_ = fdopen(in[1], "w");
    from_ = fdopen(out[0], "r");
    if (!to_ || !from_) fail("fdopen() failed");
  }

  std::string command_;
  std::mutex mu_;
  pid_t pid_ = -1;
  std::FILE* to_ = nullptr;
  std::FILE* from_ = nullptr;
};

}  // namespace

TargetDensity subprocess_target(const std::string& command, std::size_t dim, std::vector<SupportKind> support) {
  auto child = std::make_shared<Child>(command);
  return {[child](std::span<const double> x) { return child->evaluate(x); }, dim, std::move(support), "subprocess"};
}

}  // namespace qda::cli
