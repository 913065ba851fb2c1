#include "zkprov/process.hpp"

#include <fcntl.h>
#include <sched.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "zkprov/errors.hpp"

namespace zkprov {
namespace {

// Child-side, post-fork: only async-signal-safe calls until exec.
void apply_caps_or_die(const ResourceCaps& caps, int err_fd) {
    if (caps.memory_bytes > 0) {
        rlimit lim{caps.memory_bytes, caps.memory_bytes};
        if (setrlimit(RLIMIT_AS, &lim) != 0) {
            int e = errno;
            (void)!write(err_fd, &e, sizeof e);
            _exit(127);
        }
    }
    if (!caps.cpus.empty()) {
        cpu_set_t set;
        CPU_ZERO(&set);
        for (int cpu : caps.cpus) CPU_SET(cpu, &set);
        if (sched_setaffinity(0, sizeof set, &set) != 0) {
            int e = errno;
            (void)!write(err_fd, &e, sizeof e);
            _exit(127);
        }
    }
}

void redirect_or_die(const char* path, int target_fd, int err_fd) {
    int fd = open(path, O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0 || dup2(fd, target_fd) < 0) {
        int e = errno;
        (void)!write(err_fd, &e, sizeof e);
        _exit(127);
    }
    close(fd);
}

int exit_status_of(int wstatus) {
    if (WIFEXITED(wstatus)) return WEXITSTATUS(wstatus);
    if (WIFSIGNALED(wstatus)) return 128 + WTERMSIG(wstatus);
    return -1;
}

} // namespace

ChildProcess::~ChildProcess() {
    if (pid_ > 0 && !status_) {
        ::kill(pid_, SIGKILL);
        int wstatus = 0;
        waitpid(pid_, &wstatus, 0);
    }
}

ChildProcess::ChildProcess(ChildProcess&& other) noexcept
    : pid_(other.pid_), status_(other.status_) {
    other.pid_ = -1;
}

ChildProcess& ChildProcess::operator=(ChildProcess&& other) noexcept {
    if (this != &other) {
        this->~ChildProcess();
        pid_ = other.pid_;
        status_ = other.status_;
        other.pid_ = -1;
        other.status_.reset();
    }
    return *this;
}

ChildProcess ChildProcess::spawn(const SpawnOptions& options) {
    // The exec-error pipe is close-on-exec: zero bytes read back means the
    // exec succeeded.
    int pipefd[2];
    if (pipe2(pipefd, O_CLOEXEC) != 0) {
        throw Error(ErrorCode::kInternal,
                    std::string("pipe2: ") + std::strerror(errno));
    }

    std::vector<std::string> argv_store;
    argv_store.reserve(options.args.size() + 1);
    argv_store.push_back(options.exe);
    for (const auto& a : options.args) argv_store.push_back(a);
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    argv.push_back(nullptr);

    const pid_t pid = fork();
    if (pid < 0) {
        close(pipefd[0]);
        close(pipefd[1]);
        throw Error(ErrorCode::kInternal,
                    std::string("fork: ") + std::strerror(errno));
    }

    if (pid == 0) {
        close(pipefd[0]);
        apply_caps_or_die(options.caps, pipefd[1]);
        if (!options.stdout_path.empty())
            redirect_or_die(options.stdout_path.c_str(), STDOUT_FILENO, pipefd[1]);
        if (!options.stderr_path.empty())
            redirect_or_die(options.stderr_path.c_str(), STDERR_FILENO, pipefd[1]);
        for (const auto& [key, value] : options.env)
            setenv(key.c_str(), value.c_str(), 1);
        execvp(options.exe.c_str(), argv.data());
        int e = errno;
        (void)!write(pipefd[1], &e, sizeof e);
        _exit(127);
    }

    close(pipefd[1]);
    int child_errno = 0;
    const ssize_t n = read(pipefd[0], &child_errno, sizeof child_errno);
    close(pipefd[0]);
    if (n > 0) {
        int wstatus = 0;
        waitpid(pid, &wstatus, 0);
        throw Error(ErrorCode::kInternal, "failed to start " + options.exe + ": " +
                                              std::strerror(child_errno));
    }

    ChildProcess child;
    child.pid_ = pid;
    return child;
}

bool ChildProcess::running() {
    return pid_ > 0 && !status_ && !try_wait();
}

int ChildProcess::wait() {
    if (status_) return *status_;
    if (pid_ <= 0) throw Error(ErrorCode::kInternal, "wait() on empty ChildProcess");
    int wstatus = 0;
    if (waitpid(pid_, &wstatus, 0) < 0) {
        throw Error(ErrorCode::kInternal,
                    std::string("waitpid: ") + std::strerror(errno));
    }
    status_ = exit_status_of(wstatus);
    return *status_;
}

std::optional<int> ChildProcess::try_wait() {
    if (status_) return status_;
    if (pid_ <= 0) return std::nullopt;
    int wstatus = 0;
    const pid_t r = waitpid(pid_, &wstatus, WNOHANG);
    if (r == pid_) {
        status_ = exit_status_of(wstatus);
    }
    return status_;
}

void ChildProcess::kill_now() {
    if (pid_ > 0 && !status_) {
        ::kill(pid_, SIGKILL);
    }
}

int ChildProcess::terminate(double grace_seconds) {
    if (pid_ <= 0) throw Error(ErrorCode::kInternal, "terminate() on empty ChildProcess");
    if (status_) return *status_;
    ::kill(pid_, SIGTERM);
    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(grace_seconds));
    while (std::chrono::steady_clock::now() < deadline) {
        if (try_wait()) return *status_;
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    ::kill(pid_, SIGKILL);
    return wait();
}

} // namespace zkprov
