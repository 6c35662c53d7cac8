#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "greencap/errors.hpp"

namespace greencap {

/// Command line for one child execution. variant_key identifies the variant
/// in replay lookups and diagnostics; it is never passed to the child.
struct CommandSpec {
    std::string exec_path;
    std::vector<std::string> args;
    std::string variant_key;
};

struct RunOptions {
    double timeout_s = 120.0;
    /// Expose fd 3 to the child as the in-band metrics stream.
    bool open_metrics_fd = true;
    /// Runs in the parent with the child's pid after fork, while the child is
    /// still parked before exec; probe providers attach counters here.
    std::function<void(pid_t)> before_exec;
};

struct RunResult {
    int raw_status = 0;
    bool timed_out = false;
    double wall_s = 0.0;
    double max_rss_kib = 0.0;
    std::string out;
    std::string err;
    std::string metrics;
    bool output_truncated = false;

    bool exited_normally() const { return !timed_out && WIFEXITED(raw_status); }
    int exit_code() const { return WIFEXITED(raw_status) ? WEXITSTATUS(raw_status) : -1; }
};

namespace detail {

class Fd {
public:
    Fd() = default;
    explicit Fd(int fd) : fd_(fd) {}
    Fd(const Fd&) = delete;
    Fd& operator=(const Fd&) = delete;
    Fd(Fd&& other) noexcept : fd_(other.fd_) { other.fd_ = -1; }
    Fd& operator=(Fd&& other) noexcept {
        if (this != &other) {
            reset();
            fd_ = other.fd_;
            other.fd_ = -1;
        }
        return *this;
    }
    ~Fd() { reset(); }
    int get() const { return fd_; }
    int release() {
        int fd = fd_;
        fd_ = -1;
        return fd;
    }
    void reset() {
        if (fd_ >= 0) ::close(fd_);
        fd_ = -1;
    }
    bool valid() const { return fd_ >= 0; }

private:
    int fd_ = -1;
};

struct PipePair {
    Fd read_end;
    Fd write_end;
};

inline PipePair make_pipe(const char* what) {
    int fds[2];
    if (::pipe2(fds, O_CLOEXEC) != 0)
        throw ExecError(std::string("pipe2 failed for ") + what + ": " +
                        std::strerror(errno));
    PipePair p;
    p.read_end = Fd(fds[0]);
    p.write_end = Fd(fds[1]);
    return p;
}

// In the child: move `from` onto `to` and make it survive exec.
inline void wire_fd(int from, int to) {
    if (from == to) {
        ::fcntl(from, F_SETFD, 0);
        return;
    }
    ::dup2(from, to);
}

inline void set_nonblocking(int fd) {
    const int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace detail

/// Spawn the command, supervise it to exit or timeout, and capture stdout,
/// stderr, the fd-3 metrics stream, wall time, and peak RSS.
///
/// The child parks on a gate pipe between fork and exec so the parent can
/// attach per-process counters (opened with enable-on-exec) before any child
/// code runs. On timeout the child's whole process group is killed.
inline RunResult run_child(const CommandSpec& cmd, const RunOptions& opts = {}) {
    using clock = std::chrono::steady_clock;

    // The parent must survive a child that never reads its pipes.
    static const bool sigpipe_ignored = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)sigpipe_ignored;

    detail::PipePair out_pipe = detail::make_pipe("stdout");
    detail::PipePair err_pipe = detail::make_pipe("stderr");
    detail::PipePair met_pipe = detail::make_pipe("metrics");
    detail::PipePair gate = detail::make_pipe("gate");
    detail::PipePair boot = detail::make_pipe("boot");

    const pid_t pid = ::fork();
    if (pid < 0) throw ExecError(std::string("fork failed: ") + std::strerror(errno));

    if (pid == 0) {
        ::setpgid(0, 0);
        char token = 0;
        while (::read(gate.read_end.get(), &token, 1) < 0 && errno == EINTR) {
        }
        const int devnull = ::open("/dev/null", O_RDONLY);
        if (devnull >= 0) detail::wire_fd(devnull, 0);
        detail::wire_fd(out_pipe.write_end.get(), 1);
        detail::wire_fd(err_pipe.write_end.get(), 2);
        if (opts.open_metrics_fd) detail::wire_fd(met_pipe.write_end.get(), 3);

        std::vector<char*> argv;
        argv.push_back(const_cast<char*>(cmd.exec_path.c_str()));
        for (const std::string& a : cmd.args) argv.push_back(const_cast<char*>(a.c_str()));
        argv.push_back(nullptr);
        ::execv(cmd.exec_path.c_str(), argv.data());
        const int exec_errno = errno;
        [[maybe_unused]] ssize_t n =
            ::write(boot.write_end.get(), &exec_errno, sizeof exec_errno);
        ::_exit(127);
    }

    // Either side may win this race; both set the same group.
    ::setpgid(pid, pid);

    out_pipe.write_end.reset();
    err_pipe.write_end.reset();
    met_pipe.write_end.reset();
    gate.read_end.reset();
    boot.write_end.reset();

    if (opts.before_exec) {
        try {
            opts.before_exec(pid);
        } catch (...) {
            ::kill(-pid, SIGKILL);
            int status = 0;
            ::waitpid(pid, &status, 0);
            throw;
        }
    }

    const auto start = clock::now();
    {
        const char token = 'g';
        [[maybe_unused]] ssize_t n = ::write(gate.write_end.get(), &token, 1);
    }
    gate.write_end.reset();

    // Blocks until exec succeeds (EOF via close-on-exec) or the child reports
    // the exec errno.
    int exec_errno = 0;
    {
        ssize_t n;
        while ((n = ::read(boot.read_end.get(), &exec_errno, sizeof exec_errno)) < 0 &&
               errno == EINTR) {
        }
        if (n == static_cast<ssize_t>(sizeof exec_errno)) {
            int status = 0;
            ::waitpid(pid, &status, 0);
            throw ExecError("exec failed for " + cmd.exec_path + ": " +
                            std::strerror(exec_errno));
        }
    }
    boot.read_end.reset();

    detail::set_nonblocking(out_pipe.read_end.get());
    detail::set_nonblocking(err_pipe.read_end.get());
    detail::set_nonblocking(met_pipe.read_end.get());

    RunResult result;
    constexpr std::size_t kCaptureCap = 64u * 1024u * 1024u;
    const auto deadline =
        start + std::chrono::duration_cast<clock::duration>(
                    std::chrono::duration<double>(opts.timeout_s));

    struct Stream {
        detail::Fd* fd;
        std::string* sink;
    };
    Stream streams[3] = {{&out_pipe.read_end, &result.out},
                         {&err_pipe.read_end, &result.err},
                         {&met_pipe.read_end, &result.metrics}};

    char buf[65536];
    bool killed = false;
    while (true) {
        pollfd pfds[3];
        nfds_t nfds = 0;
        for (const Stream& s : streams) {
            if (!s.fd->valid()) continue;
            pfds[nfds].fd = s.fd->get();
            pfds[nfds].events = POLLIN;
            pfds[nfds].revents = 0;
            ++nfds;
        }
        if (nfds == 0) break;

        const auto now = clock::now();
        if (!killed && now >= deadline) {
            ::kill(-pid, SIGKILL);
            killed = true;
            result.timed_out = true;
        }
        int wait_ms = 100;
        if (!killed) {
            const auto left =
                std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
                    .count();
            wait_ms = static_cast<int>(std::clamp<long long>(left, 1, 100));
        }
        const int rc = ::poll(pfds, nfds, wait_ms);
        if (rc < 0) {
            if (errno == EINTR) continue;
            ::kill(-pid, SIGKILL);
            killed = true;
        }
        for (nfds_t i = 0; i < nfds; ++i) {
            if (!(pfds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
            for (Stream& s : streams) {
                if (!s.fd->valid() || s.fd->get() != pfds[i].fd) continue;
                while (true) {
                    const ssize_t n = ::read(s.fd->get(), buf, sizeof buf);
                    if (n > 0) {
                        const std::size_t room =
                            s.sink->size() < kCaptureCap ? kCaptureCap - s.sink->size() : 0;
                        if (room > 0) {
                            s.sink->append(buf, std::min<std::size_t>(n, room));
                            if (static_cast<std::size_t>(n) > room)
                                result.output_truncated = true;
                        } else {
                            result.output_truncated = true;
                        }
                        continue;
                    }
                    if (n == 0) {
                        s.fd->reset();
                        break;
                    }
                    if (errno == EAGAIN || errno == EWOULDBLOCK) break;
                    if (errno == EINTR) continue;
                    s.fd->reset();
                    break;
                }
            }
        }
    }

    // The child may have closed its pipes and kept running; keep the deadline
    // in force while reaping.
    int status = 0;
    rusage usage{};
    while (true) {
        const pid_t reaped = ::wait4(pid, &status, WNOHANG, &usage);
        if (reaped == pid) break;
        if (reaped < 0 && errno != EINTR) break;
        if (!killed && clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            killed = true;
            result.timed_out = true;
        }
        ::usleep(1000);
    }
    const auto end = clock::now();

    result.raw_status = status;
    result.wall_s = std::chrono::duration<double>(end - start).count();
    result.max_rss_kib = static_cast<double>(usage.ru_maxrss);
    return result;
}

}  // namespace greencap
