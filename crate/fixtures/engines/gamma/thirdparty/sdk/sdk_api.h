#pragma once
#include <stddef.h>

// sdk_api
