# Boolean synchronous dynamic system toolkit
