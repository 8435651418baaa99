#pragma once
#include <Engine/Core/Context.h>

// Cache
