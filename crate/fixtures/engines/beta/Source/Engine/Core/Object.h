#pragma once
#include <string>

// Object
