#pragma once

#include "mbk/quadrature.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mbk::detail
{
	// Sums chunk(i) for i < chunks. Partial results are combined in chunk order, so
	// the value does not depend on the number of threads.
	template <class T, class F>
	T ordered_sum(std::size_t chunks, F &&chunk)
	{
		std::vector<T> partial(chunks, T(0));
		const unsigned workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(chunks, 1));
		if (workers <= 1)
		{
			for (std::size_t i = 0; i < chunks; ++i)
				partial[i] = chunk(i);
		}
		else
		{
			std::atomic<std::size_t> next{0};
			std::exception_ptr failure;
			std::mutex failure_mutex;
			std::vector<std::thread> pool;
			for (unsigned t = 0; t < workers; ++t)
				pool.emplace_back([&] {
					try
					{
						for (std::size_t i = next++; i < chunks; i = next++)
							partial[i] = chunk(i);
					}
					catch (...)
					{
						std::lock_guard<std::mutex> lock(failure_mutex);
						if (!failure)
							failure = std::current_exception();
						next = chunks;
					}
				});
			for (auto &th : pool)
				th.join();
			if (failure)
				std::rethrow_exception(failure);
		}
		T total(0);
		for (const T &v : partial)
			total += v;
		return total;
	}
} // namespace mbk::detail
