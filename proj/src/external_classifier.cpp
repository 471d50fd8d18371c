#include "rwrobust/external_classifier.hpp"

#include "rwrobust/errors.hpp"

#include <cerrno>
#include <charconv>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

namespace rwr {

namespace {

std::string errno_text(const char* what) {
    return std::string(what) + ": " + std::strerror(errno);
}

// Writing to a child that already exited must surface as an error, not kill us.
void ignore_sigpipe_once() {
    static const bool done = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)done;
}

} // namespace

std::string encode_protocol_line(const Eigen::Ref<const Eigen::RowVectorXd>& x) {
    std::string line;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (i) line += ',';
        line += format_exact(x(i));
    }
    return line;
}

struct ExternalClassifier::Process {
    pid_t pid = -1;
    pid_t group = -1; // process group left behind once pid is reaped
    int to_child = -1;
    int from_child = -1;
    std::string pending; // bytes read past the last complete line
    std::size_t lines_read = 0;
    bool broken = false;

    explicit Process(const std::string& command) {
        ignore_sigpipe_once();
        int in_pipe[2], out_pipe[2];
        // O_CLOEXEC so children forked concurrently by other workers do not
        // inherit these ends and keep the pipes open.
        if (pipe2(in_pipe, O_CLOEXEC) != 0) throw ExternalModelError(errno_text("pipe"));
        if (pipe2(out_pipe, O_CLOEXEC) != 0) {
            ::close(in_pipe[0]);
            ::close(in_pipe[1]);
            throw ExternalModelError(errno_text("pipe"));
        }
        pid = fork();
        if (pid < 0) {
            for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
            throw ExternalModelError(errno_text("fork"));
        }
        if (pid == 0) {
            setpgid(0, 0);
            dup2(in_pipe[0], STDIN_FILENO);
            dup2(out_pipe[1], STDOUT_FILENO);
            for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
            execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        ::close(in_pipe[0]);
        ::close(out_pipe[1]);
        to_child = in_pipe[1];
        from_child = out_pipe[0];
        setpgid(pid, pid); // also in the parent, whichever runs first
        fcntl(to_child, F_SETFL, fcntl(to_child, F_GETFL) | O_NONBLOCK);
        fcntl(from_child, F_SETFL, fcntl(from_child, F_GETFL) | O_NONBLOCK);
    }

    ~Process() {
        if (to_child >= 0) ::close(to_child);
        if (from_child >= 0) ::close(from_child);
        if (pid > 0) {
            // The whole group: sh -c may have forked the real model.
            kill(-pid, SIGTERM);
            if (!reap(std::chrono::milliseconds(2000))) {
                kill(-pid, SIGKILL);
                int status = 0;
                waitpid(pid, &status, 0);
            }
        } else if (group > 0) {
            kill(-group, SIGKILL);
        }
    }

    /// Waits up to `grace` for the child to exit; true once it is reaped.
    bool reap(std::chrono::milliseconds grace, int* status_out = nullptr) {
        const auto until = std::chrono::steady_clock::now() + grace;
        for (;;) {
            int status = 0;
            const pid_t r = waitpid(pid, &status, WNOHANG);
            if (r == pid) {
                if (status_out) *status_out = status;
                group = pid;
                pid = -1;
                return true;
            }
            if (r < 0) return false;
            if (std::chrono::steady_clock::now() >= until) return false;
            ::usleep(2000);
        }
    }

    std::string exit_description() {
        int status = 0;
        if (pid > 0 && reap(std::chrono::milliseconds(1000), &status)) {
            if (WIFEXITED(status)) return "model process exited with status " + std::to_string(WEXITSTATUS(status));
            if (WIFSIGNALED(status)) return "model process killed by signal " + std::to_string(WTERMSIG(status));
        }
        return "model process closed its output";
    }

    /// Writes `payload` and collects `expected` response lines, interleaving
    /// both directions so neither pipe can fill up and deadlock.
    std::vector<std::string> exchange(const std::string& payload, std::size_t expected, std::chrono::milliseconds timeout) {
        using clock = std::chrono::steady_clock;
        const auto deadline = clock::now() + timeout;
        std::size_t written = 0;
        std::vector<std::string> lines;
        lines.reserve(expected);
        char buf[65536];

        auto take_lines = [&] {
            std::size_t start = 0;
            for (std::size_t nl; (nl = pending.find('\n', start)) != std::string::npos; start = nl + 1) {
                ++lines_read;
                if (lines.size() == expected)
                    throw ExternalModelError("model wrote more lines than samples it was sent", lines_read);
                std::string line = pending.substr(start, nl - start);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                lines.push_back(std::move(line));
            }
            pending.erase(0, start);
        };

        while (lines.size() < expected) {
            const auto now = clock::now();
            if (now >= deadline)
                throw ExternalModelError("model timed out after " + std::to_string(timeout.count()) + " ms", lines_read + 1);
            const auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();

            pollfd fds[2];
            nfds_t count = 0;
            fds[count++] = {from_child, POLLIN, 0};
            if (written < payload.size()) fds[count++] = {to_child, POLLOUT, 0};
            const int ready = ::poll(fds, count, static_cast<int>(std::min<long long>(wait_ms + 1, 1 << 30)));
            if (ready < 0) {
                if (errno == EINTR) continue;
                throw ExternalModelError(errno_text("poll"));
            }
            if (ready == 0) continue;

            if (count == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
                const ssize_t n = ::write(to_child, payload.data() + written, payload.size() - written);
                if (n < 0 && errno != EAGAIN && errno != EINTR) {
                    throw ExternalModelError(exit_description() + " while receiving input", lines_read + 1);
                }
                if (n > 0) written += static_cast<std::size_t>(n);
            }
            if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
                const ssize_t n = ::read(from_child, buf, sizeof buf);
                if (n == 0) throw ExternalModelError(exit_description(), lines_read + 1);
                if (n < 0) {
                    if (errno == EAGAIN || errno == EINTR) continue;
                    throw ExternalModelError(errno_text("read"), lines_read + 1);
                }
                pending.append(buf, static_cast<std::size_t>(n));
                take_lines();
            }
        }
        if (!pending.empty())
            throw ExternalModelError("model wrote more lines than samples it was sent", lines_read + 1);
        return lines;
    }
};

ExternalClassifier::ExternalClassifier(ExternalModelSpec spec) : spec_(std::move(spec)) {
    if (spec_.command.empty()) throw UsageError("external model command is empty");
    if (spec_.feature_count == 0) throw UsageError("external model feature count must be >= 1");
    if (spec_.batch_size == 0) throw UsageError("external model batch size must be >= 1");
    if (spec_.timeout.count() <= 0) throw UsageError("external model timeout must be positive");
}

ExternalClassifier::~ExternalClassifier() = default;

std::unique_ptr<Classifier> ExternalClassifier::spawn() const {
    return std::make_unique<ExternalClassifier>(spec_);
}

std::vector<Label> ExternalClassifier::predict(const SampleMatrix& batch) const {
    if (static_cast<std::size_t>(batch.cols()) != spec_.feature_count)
        throw LayoutError("batch has " + std::to_string(batch.cols()) + " features, external model expects " +
                          std::to_string(spec_.feature_count));
    std::lock_guard lock(mutex_);
    if (process_ && process_->broken) throw ExternalModelError("model process is unusable after an earlier protocol error");
    if (!process_) process_ = std::make_unique<Process>(spec_.command);

    std::vector<Label> out;
    out.reserve(static_cast<std::size_t>(batch.rows()));
    const auto rows = static_cast<std::size_t>(batch.rows());
    try {
        for (std::size_t start = 0; start < rows; start += spec_.batch_size) {
            const std::size_t count = std::min(spec_.batch_size, rows - start);
            std::string payload;
            payload.reserve(count * spec_.feature_count * 12);
            for (std::size_t r = start; r < start + count; ++r) {
                payload += encode_protocol_line(batch.row(static_cast<Eigen::Index>(r)));
                payload += '\n';
            }
            const std::size_t first_line = process_->lines_read + 1;
            auto lines = process_->exchange(payload, count, spec_.timeout);
            for (std::size_t i = 0; i < lines.size(); ++i) {
                const std::string& token = lines[i];
                if (!is_valid_token(token))
                    throw ExternalModelError("malformed label token '" + token + "'", first_line + i);
                if (spec_.output == OutputKind::Regression) {
                    double v = 0.0;
                    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
                    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v))
                        throw ExternalModelError("regression output '" + token + "' is not a decimal number", first_line + i);
                    out.push_back(Label{token, v});
                } else {
                    out.push_back(Label::classification(token));
                }
            }
        }
    } catch (...) {
        process_->broken = true;
        throw;
    }
    return out;
}

} // namespace rwr
