/* SPDX-License-Identifier: Apache-2.0
 *
 * Copyright 2026 The sdnv Authors
 */

#include "sdnv/subprocess.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace sdnv {

namespace {

struct Pipe {
    int fd[2] = {-1, -1};
    ~Pipe()
    {
        for (int f : fd) {
            if (f >= 0)
                ::close(f);
        }
    }
    void close_end(int i)
    {
        if (fd[i] >= 0) {
            ::close(fd[i]);
            fd[i] = -1;
        }
    }
};

} // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          std::chrono::milliseconds timeout)
{
    ProcessResult result;
    if (argv.empty())
        return result;
    Pipe in, out, err;
    if (::pipe2(in.fd, O_CLOEXEC) != 0 || ::pipe2(out.fd, O_CLOEXEC) != 0 || ::pipe2(err.fd, O_CLOEXEC) != 0)
        return result;

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in.fd[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out.fd[1], STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, err.fd[1], STDERR_FILENO);

    std::vector<char*> args;
    for (const auto& a : argv)
        args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    pid_t pid = 0;
    int rc = posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    if (rc != 0) {
        result.err = std::string("cannot start ") + argv[0] + ": " + std::strerror(rc);
        return result;
    }
    result.started = true;
    in.close_end(0);
    out.close_end(1);
    err.close_end(1);

    // SIGPIPE would kill us if the child exits before reading everything.
    static const bool sigpipe_ignored = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)sigpipe_ignored;

    const auto deadline = std::chrono::steady_clock::now() + timeout;
    std::size_t written = 0;
    if (input.empty())
        in.close_end(1);
    else
        ::fcntl(in.fd[1], F_SETFL, O_NONBLOCK);

    char buf[65536];
    while (out.fd[0] >= 0 || err.fd[0] >= 0) {
        auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            result.timed_out = true;
            ::kill(pid, SIGKILL);
            break;
        }
        pollfd fds[3];
        nfds_t n = 0;
        int in_slot = -1, out_slot = -1, err_slot = -1;
        if (in.fd[1] >= 0) {
            fds[n] = {in.fd[1], POLLOUT, 0};
            in_slot = static_cast<int>(n++);
        }
        if (out.fd[0] >= 0) {
            fds[n] = {out.fd[0], POLLIN, 0};
            out_slot = static_cast<int>(n++);
        }
        if (err.fd[0] >= 0) {
            fds[n] = {err.fd[0], POLLIN, 0};
            err_slot = static_cast<int>(n++);
        }
        auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        int ready = ::poll(fds, n, static_cast<int>(std::min<long long>(wait_ms + 1, 1000)));
        if (ready < 0) {
            if (errno == EINTR)
                continue;
            break;
        }
        if (in_slot >= 0 && (fds[in_slot].revents & (POLLOUT | POLLERR | POLLHUP))) {
            ssize_t w = ::write(in.fd[1], input.data() + written, input.size() - written);
            if (w > 0)
                written += static_cast<std::size_t>(w);
            if (w < 0 && errno != EAGAIN)
                written = input.size();
            if (written >= input.size())
                in.close_end(1);
        }
        auto drain = [&](int slot, Pipe& p, std::string& sink) {
            if (slot < 0 || !(fds[slot].revents & (POLLIN | POLLHUP | POLLERR)))
                return;
            ssize_t r = ::read(p.fd[0], buf, sizeof buf);
            if (r > 0)
                sink.append(buf, static_cast<std::size_t>(r));
            else if (r == 0 || errno != EINTR)
                p.close_end(0);
        };
        drain(out_slot, out, result.out);
        drain(err_slot, err, result.err);
    }
    in.close_end(1);

    int status = 0;
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    return result;
}

} // namespace sdnv
